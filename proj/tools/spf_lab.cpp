// spf-lab: command-line front end.  Thin sequential shell over the library;
// all randomness flows from --seed, every output file gets a manifest
// alongside it, and primary outputs are byte-identical for identical seeds.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spflab/json_io.hpp"
#include "spflab/version.hpp"

using namespace spflab;
using io::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw errors::parse_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw errors::parse_error("invalid JSON in '" + path + "': " + e.what());
    }
}

double parse_p(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity")
        return kInf;
    try {
        return std::stod(text);
    } catch (const std::exception&) {
        throw errors::parse_error("cannot parse exponent '" + text + "'");
    }
}

Complex parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw errors::parse_error("expected complex as 're,im', got '" + text + "'");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw errors::parse_error("cannot parse complex '" + text + "'");
    }
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw errors::parse_error("cannot parse integer list entry '" + item + "'");
        }
    }
    if (out.empty()) throw errors::parse_error("empty integer list");
    return out;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct OutputContext {
    std::string command_line;
    std::string input_hash = io::fnv1a64_hex("");
    std::uint64_t seed = 0;
};

void write_manifest(const std::string& out_path, const OutputContext& ctx) {
    const json manifest{{"command_line", ctx.command_line},
                        {"input_hash", ctx.input_hash},
                        {"seed", ctx.seed},
                        {"tool_version", std::string("spf-lab ") + kVersion},
                        {"timestamp", iso_timestamp()}};
    std::ofstream out(out_path + ".manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
}

void emit(std::string text, const std::string& out_path, const OutputContext& ctx) {
    if (text.empty() || text.back() != '\n') text += '\n';
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw errors::parse_error("cannot open output '" + out_path + "'");
    out << text;
    write_manifest(out_path, ctx);
}

std::string csv_escape(const std::string& s) {
    std::string quoted = "\"";
    for (char c : s) {
        quoted += c;
        if (c == '"') quoted += '"';
    }
    quoted += '"';
    return quoted;
}

std::string num_str(double v) { return json(v).dump(); }

std::string reports_to_csv(const std::vector<BoundReport>& reports) {
    std::string out = "name,n,lhs,rhs_without_constant,ratio,pass,context\n";
    for (const BoundReport& rep : reports) {
        json context(rep.context);
        for (const auto& [key, value] : rep.flags) context[key] = value;
        const double n = rep.context.count("n") ? rep.context.at("n") : 0.0;
        out += rep.name + "," + num_str(n) + "," + num_str(rep.lhs) + "," +
               num_str(rep.rhs_without_constant) + "," + num_str(rep.ratio) + "," +
               (rep.pass ? "true" : "false") + "," + csv_escape(context.dump()) + "\n";
    }
    return out;
}

std::size_t auto_pole_index(const Spf& spf) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < spf.poles().size(); ++i)
        if (std::abs(spf.poles()[i].location.imag()) <
            std::abs(spf.poles()[best].location.imag()))
            best = i;
    return best;
}

std::vector<BoundReport> run_checks(const Spf& spf, const std::string& which, double p,
                                    double theta, double r, std::size_t pole_index) {
    std::vector<BoundReport> reports;
    const bool all = which == "all";
    if ((all && spf.order() >= 4) || which == "theorem1") {
        for (BoundReport& rep : bounds::theorem1_check(spf)) reports.push_back(std::move(rep));
    }
    if (all || which == "theorem2") reports.push_back(bounds::theorem2_check(spf));
    if (all || which == "lemma1") {
        const Spf unit = rescale(spf, 1.0 / norms::sup_norm_real(spf).value);
        const auto out = symmetrize::run_pipeline(unit, pole_index, false);
        reports.push_back(bounds::lemma1_check(out.result, out.tracked_pole.imag(), theta, r));
    }
    if (all || which == "lemma3") reports.push_back(bounds::lemma3_check(spf));
    if (all || which == "beta-p") {
        const double finite_p = std::isinf(p) ? 2.0 : p;
        reports.push_back(norms::beta_p_check(spf, finite_p));
    }
    if (reports.empty())
        throw errors::parse_error("nothing to check for '" + which + "'");
    return reports;
}

search::SearchConfig build_search_config(int n, const std::string& functional,
                                         const std::string& p_text, const std::string& pattern,
                                         int multistarts, int budget, std::uint64_t seed,
                                         bool restrict_upper) {
    search::SearchConfig cfg;
    cfg.order_n = n;
    cfg.multiplicity_pattern =
        search::make_pattern(search::pattern_kind_from_string(pattern), n);
    if (functional == "gorin") cfg.functional = FunctionalKind::gorin;
    else if (functional == "gelfond") cfg.functional = FunctionalKind::gelfond;
    else throw errors::parse_error("unknown functional '" + functional + "'");
    cfg.p = parse_p(p_text);
    cfg.multistarts = multistarts;
    cfg.eval_budget = budget;
    cfg.seed = seed;
    cfg.restrict_upper_half = restrict_upper;
    return cfg;
}

std::string scan_rows_to_csv(const std::vector<search::ScanRow>& rows) {
    std::string out = "n,pattern,best_value,reference_rate,ratio,seed,evals\n";
    for (const search::ScanRow& row : rows)
        out += std::to_string(row.n) + "," + row.pattern + "," + num_str(row.best_value) +
               "," + num_str(row.reference_rate) + "," + num_str(row.ratio) + "," +
               std::to_string(row.seed) + "," + std::to_string(row.evals) + "\n";
    return out;
}

} // namespace

int main(int argc, char** argv) {
    std::string command_line;
    for (int i = 0; i < argc; ++i) {
        if (i) command_line += ' ';
        command_line += argv[i];
    }

    CLI::App app{"spf-lab: simple partial fractions on the real line"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("spf-lab ") + kVersion);

    std::string input, out_path, csv_path, at_text;
    std::string kind = "sup", which = "all", p_text = "inf", functional = "gorin";
    std::string pattern = "ones", check_name = "decomposition", n_list_text;
    bool derivative = false, emit_stages = false, symmetrize_input = false;
    bool csv_mode = false, json_mode = false, restrict_upper = false, strict = false;
    double theta = 0.5, radius = 1.0, series_a = 1.0, series_tol = 1e-10;
    int pole_index = -1, samples = 50, n_order = 32, multistarts = 32, budget = 20000;
    int table_n = 0, root_k = 0;
    std::uint64_t seed = 0;

    CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate an SPF at a point");
    cmd_eval->add_option("--input", input)->required();
    cmd_eval->add_option("--at", at_text, "point as re,im")->required();
    cmd_eval->add_flag("--derivative", derivative);
    cmd_eval->add_option("--out", out_path);

    CLI::App* cmd_norm = app.add_subcommand("norm", "sup / L^p norm of an SPF");
    cmd_norm->add_option("--input", input)->required();
    cmd_norm->add_option("--kind", kind)->check(CLI::IsMember({"sup", "lp"}));
    cmd_norm->add_option("--p", p_text);
    cmd_norm->add_flag("--derivative", derivative);
    cmd_norm->add_option("--out", out_path);

    CLI::App* cmd_fun = app.add_subcommand("functional", "scale-invariant functionals");
    cmd_fun->add_option("--input", input)->required();
    cmd_fun->add_option("--which", functional)->check(CLI::IsMember({"gorin", "gelfond"}));
    cmd_fun->add_option("--p", p_text);
    cmd_fun->add_option("--out", out_path);

    CLI::App* cmd_bla = app.add_subcommand("blaschke", "Blaschke product checks");
    cmd_bla->add_option("--input", input)->required();
    cmd_bla->add_option("--check", check_name)
        ->check(CLI::IsMember({"decomposition", "phase-integral", "roots"}));
    cmd_bla->add_flag("--symmetrize-input", symmetrize_input);
    cmd_bla->add_option("--pole-index", pole_index);
    cmd_bla->add_option("--samples", samples);
    cmd_bla->add_option("--k", root_k, "check a single phase-integral index");
    cmd_bla->add_option("--seed", seed);
    cmd_bla->add_option("--out", out_path);

    CLI::App* cmd_sym = app.add_subcommand("symmetrize", "run the reduction pipeline");
    cmd_sym->add_option("--input", input)->required();
    cmd_sym->add_option("--pole-index", pole_index);
    cmd_sym->add_flag("--emit-stages", emit_stages);
    cmd_sym->add_option("--out", out_path);

    CLI::App* cmd_chk = app.add_subcommand("check", "inequality checkers");
    cmd_chk->add_option("--input", input);
    cmd_chk->add_option("--which", which)
        ->check(CLI::IsMember({"theorem1", "theorem2", "lemma1", "lemma3", "beta-p", "all",
                               "historical"}));
    cmd_chk->add_option("--p", p_text);
    cmd_chk->add_option("--theta", theta);
    cmd_chk->add_option("--r", radius);
    cmd_chk->add_option("--pole-index", pole_index);
    cmd_chk->add_option("--n", table_n, "order for --which historical");
    cmd_chk->add_flag("--csv", csv_mode);
    cmd_chk->add_flag("--json", json_mode);
    cmd_chk->add_option("--out", out_path);

    CLI::App* cmd_search = app.add_subcommand("search", "multistart functional minimisation");
    cmd_search->add_option("--n", n_order)->required();
    cmd_search->add_option("--functional", functional)
        ->check(CLI::IsMember({"gorin", "gelfond"}));
    cmd_search->add_option("--p", p_text);
    cmd_search->add_option("--pattern", pattern)
        ->check(CLI::IsMember({"ones", "single-heavy", "balanced"}));
    cmd_search->add_option("--multistarts", multistarts);
    cmd_search->add_option("--budget", budget);
    cmd_search->add_option("--seed", seed);
    cmd_search->add_flag("--restrict-upper-half", restrict_upper);
    cmd_search->add_flag("--strict", strict);
    cmd_search->add_option("--out", out_path);

    CLI::App* cmd_scan = app.add_subcommand("scan", "order scan against reference rates");
    cmd_scan->add_option("--n-list", n_list_text)->required();
    cmd_scan->add_option("--functional", functional)
        ->check(CLI::IsMember({"gorin", "gelfond"}));
    cmd_scan->add_option("--p", p_text);
    cmd_scan->add_option("--pattern", pattern)
        ->check(CLI::IsMember({"ones", "single-heavy", "balanced"}));
    cmd_scan->add_option("--multistarts", multistarts);
    cmd_scan->add_option("--budget", budget);
    cmd_scan->add_option("--seed", seed);
    cmd_scan->add_flag("--restrict-upper-half", restrict_upper);
    cmd_scan->add_option("--csv", csv_path);
    cmd_scan->add_option("--out", out_path);

    CLI::App* cmd_series = app.add_subcommand("series", "partial-fraction series vs tanh");
    cmd_series->add_option("--a", series_a)->required();
    cmd_series->add_option("--tol", series_tol);
    cmd_series->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
        std::cerr << app.help() << "\n";
        return 1;
    }
    (void)json_mode; // JSON is the default; the flag exists for symmetry with --csv

    OutputContext ctx;
    ctx.command_line = command_line;
    ctx.seed = seed;

    try {
        if (!input.empty()) ctx.input_hash = io::fnv1a64_hex(read_file(input));

        if (cmd_eval->parsed()) {
            const Spf spf = io::spf_from_json(load_json(input));
            const Complex z = parse_complex(at_text);
            const Complex v = derivative ? spf.eval_derivative(z) : spf.eval(z);
            emit(json{{"re", v.real()}, {"im", v.imag()}, {"repr", io::complex_repr(v)}}.dump(2),
                 out_path, ctx);
        } else if (cmd_norm->parsed()) {
            const Spf spf = io::spf_from_json(load_json(input));
            const norms::NormResult r = kind == "sup"
                                            ? norms::sup_norm_real(spf, derivative)
                                            : norms::lp_norm_real(spf, parse_p(p_text), derivative);
            emit(io::norm_to_json(r).dump(2), out_path, ctx);
        } else if (cmd_fun->parsed()) {
            const Spf spf = io::spf_from_json(load_json(input));
            const double p = parse_p(p_text);
            const FunctionalValue f = functional == "gorin"
                                          ? norms::gorin_functional(spf, p)
                                          : norms::gelfond_functional(spf, p);
            emit(io::functional_to_json(f).dump(2), out_path, ctx);
        } else if (cmd_bla->parsed()) {
            const json doc = load_json(input);
            std::optional<blaschke::SymmetricConfiguration> conf;
            if (symmetrize_input) {
                const Spf spf = io::spf_from_json(doc);
                const std::size_t idx =
                    pole_index >= 0 ? std::size_t(pole_index) : auto_pole_index(spf);
                conf.emplace(symmetrize::run_pipeline(spf, idx, false).result);
            } else {
                conf.emplace(io::configuration_from_json(doc));
            }
            if (check_name == "roots") {
                const blaschke::RootSet rs = blaschke::minus_one_roots(*conf);
                emit(io::root_set_to_json(rs).dump(2), out_path, ctx);
            } else if (check_name == "decomposition") {
                num::Rng rng(seed);
                double span = 1.0;
                for (const Pole& p : conf->upper_poles())
                    span = std::max(span, std::abs(p.location.real()) + p.location.imag());
                std::vector<Complex> pts;
                while (int(pts.size()) < samples) {
                    const Complex z(rng.uniform(-2 * span, 2 * span),
                                    rng.uniform(0.1 * span, 2 * span) *
                                        (rng.coin() ? 1.0 : -1.0));
                    if (std::abs(blaschke::blaschke_eval(*conf, z) + 1.0) < 0.05) continue;
                    pts.push_back(z);
                }
                emit(io::report_to_json(blaschke::decomposition_check(*conf, pts)).dump(2),
                     out_path, ctx);
            } else { // phase-integral
                json checks = json::array();
                bool all_pass = true;
                const int k_lo = root_k > 0 ? root_k : 1;
                const int k_hi = root_k > 0 ? root_k : conf->eta();
                for (int k = k_lo; k <= k_hi; ++k) {
                    const BoundReport rep = blaschke::phase_integral_check(*conf, k);
                    all_pass = all_pass && rep.pass;
                    checks.push_back(io::report_to_json(rep));
                }
                emit(json{{"pass", all_pass}, {"checks", std::move(checks)}}.dump(2),
                     out_path, ctx);
            }
        } else if (cmd_sym->parsed()) {
            const Spf spf = io::spf_from_json(load_json(input));
            const std::size_t idx =
                pole_index >= 0 ? std::size_t(pole_index) : auto_pole_index(spf);
            const auto out = symmetrize::run_pipeline(spf, idx, true);
            emit(io::pipeline_output_to_json(out, emit_stages).dump(2), out_path, ctx);
        } else if (cmd_chk->parsed()) {
            if (which == "historical") {
                if (table_n < 2) throw errors::parse_error("--which historical needs --n");
                emit(io::historical_to_json(bounds::historical_bounds(table_n)).dump(2),
                     out_path, ctx);
            } else {
                if (input.empty()) throw errors::parse_error("check needs --input");
                const Spf spf = io::spf_from_json(load_json(input));
                const std::size_t idx =
                    pole_index >= 0 ? std::size_t(pole_index) : auto_pole_index(spf);
                const auto reports =
                    run_checks(spf, which, parse_p(p_text), theta, radius, idx);
                if (csv_mode) {
                    emit(reports_to_csv(reports), out_path, ctx);
                } else {
                    json arr = json::array();
                    for (const BoundReport& rep : reports)
                        arr.push_back(io::report_to_json(rep));
                    emit(arr.dump(2), out_path, ctx);
                }
            }
        } else if (cmd_search->parsed()) {
            const search::SearchConfig cfg =
                build_search_config(n_order, functional, p_text, pattern, multistarts,
                                    budget, seed, restrict_upper);
            const search::SearchRecord rec = search::optimize(cfg);
            emit(io::record_to_json(rec).dump(2), out_path, ctx);
            if (strict && rec.budget_exhausted) {
                std::cerr << json{{"error", "BudgetExhausted"},
                                  {"message", "evaluation budget exhausted"}}
                                 .dump()
                          << "\n";
                return 2;
            }
        } else if (cmd_scan->parsed()) {
            const std::vector<int> ns = parse_int_list(n_list_text);
            const search::SearchConfig tmpl =
                build_search_config(ns.front(), functional, p_text, pattern, multistarts,
                                    budget, seed, restrict_upper);
            const auto rows =
                search::scan_orders(ns, tmpl, search::pattern_kind_from_string(pattern));
            if (!csv_path.empty()) emit(scan_rows_to_csv(rows), csv_path, ctx);
            json arr = json::array();
            for (const search::ScanRow& row : rows) arr.push_back(io::scan_row_to_json(row));
            if (!out_path.empty() || csv_path.empty()) emit(arr.dump(2), out_path, ctx);
        } else if (cmd_series->parsed()) {
            const double value = bounds::tanh_series(series_a, series_tol);
            const double closed = std::tanh(series_a);
            emit(json{{"a", series_a},
                      {"tol", series_tol},
                      {"value", value},
                      {"closed_form", closed},
                      {"difference", value - closed}}
                     .dump(2),
                 out_path, ctx);
        }
    } catch (const Error& e) {
        std::cerr << json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
        return e.kind() == "ConvergenceFailure" ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
