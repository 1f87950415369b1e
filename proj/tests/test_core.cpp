#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "spflab/spf.hpp"

using namespace spflab;
using testgen::f1;
using testgen::f2;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
bool throws_kind(const std::function<void()>& fn, const std::string& kind) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}
} // namespace

TEST_CASE("make_spf validates input") {
    CHECK(f1().order() == 1);
    CHECK(f2().order() == 2);

    CHECK(throws_kind([] { Spf({{Complex(0, 1), 1}, {Complex(0, 1), 2}}); }, "DuplicatePole"));
    CHECK(throws_kind([] { Spf({{Complex(2, 0), 1}}); }, "RealPole"));
    CHECK(throws_kind([] { Spf(std::vector<Pole>{}); }, "EmptyInput"));
    CHECK(throws_kind([] { Spf({{Complex(0, 1), 0}}); }, "DomainError"));
}

TEST_CASE("poles are stored sorted by (re, im)") {
    Spf s({{Complex(2, 1), 1}, {Complex(-1, 3), 2}, {Complex(-1, -4), 1}});
    REQUIRE(s.poles().size() == 3);
    CHECK(s.poles()[0].location == Complex(-1, -4));
    CHECK(s.poles()[1].location == Complex(-1, 3));
    CHECK(s.poles()[2].location == Complex(2, 1));
    CHECK(s.order() == 4);
}

TEST_CASE("eval matches closed forms") {
    // F1(0) = 1/(0 - i) = i
    const Complex v1 = f1().eval(Complex(0, 0));
    CHECK_THAT(v1.real(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(v1.imag(), WithinAbs(1.0, 1e-15));

    // F2(x) = 2x / (x^2 + 1) on R
    CHECK_THAT(f2().eval(Complex(1, 0)).real(), WithinAbs(1.0, 1e-15));
    num::Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.uniform(-10.0, 10.0);
        const Complex v = f2().eval(Complex(x, 0));
        CHECK_THAT(v.real(), WithinAbs(2 * x / (x * x + 1), 1e-13));
        CHECK_THAT(v.imag(), WithinAbs(0.0, 1e-14));
    }

    CHECK(throws_kind([] { f2().eval(Complex(0, 1)); }, "EvalAtPole"));
}

TEST_CASE("eval_derivative matches closed forms") {
    // F1'(0) = -1/(0-i)^2 = 1
    const Complex d1 = f1().eval_derivative(Complex(0, 0));
    CHECK_THAT(d1.real(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(d1.imag(), WithinAbs(0.0, 1e-15));

    // F2'(x) = 2(1 - x^2)/(1 + x^2)^2: value 2 at x = 0, critical points x = +-1
    CHECK_THAT(f2().eval_derivative(Complex(0, 0)).real(), WithinAbs(2.0, 1e-15));
    CHECK_THAT(std::abs(f2().eval_derivative(Complex(1, 0))), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(f2().eval_derivative(Complex(-1, 0))), WithinAbs(0.0, 1e-15));
}

TEST_CASE("min_abs_imag") {
    CHECK(f1().min_abs_imag() == 1.0);
    Spf s({{Complex(3, 2), 1}, {Complex(-5, -0.5), 4}});
    CHECK(s.min_abs_imag() == 0.5);
    CHECK(rescale(f1(), 2.0).min_abs_imag() == 0.5);
}

TEST_CASE("rescale") {
    const Spf id = rescale(f1(), 1.0);
    CHECK(id.poles() == f1().poles());

    const Spf half = rescale(f1(), 2.0);
    REQUIRE(half.poles().size() == 1);
    CHECK(half.poles()[0].location == Complex(0, 0.5));

    // varrho(z) = c rho(c z): eval(rescale(F2,3), 1/3) = 3 * eval(F2, 1) = 3
    CHECK_THAT(rescale(f2(), 3.0).eval(Complex(1.0 / 3.0, 0)).real(), WithinRel(3.0, 1e-14));

    CHECK(throws_kind([] { rescale(f1(), 0.0); }, "NonpositiveScale"));
    CHECK(throws_kind([] { rescale(f1(), -1.0); }, "NonpositiveScale"));
}

TEST_CASE("rescale identity at random points, Y scaling exact") {
    num::Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const Spf s = testgen::random_spf(rng, 9);
        const double c = rng.uniform(0.1, 5.0);
        const Spf r = rescale(s, c);
        CHECK_THAT(r.min_abs_imag(), WithinRel(s.min_abs_imag() / c, 1e-15));
        for (int j = 0; j < 10; ++j) {
            const Complex z(rng.uniform(-6, 6), rng.uniform(2.5, 8.0));
            const Complex lhs = r.eval(z / c) / c; // rho(z) = varrho(z/c)/c
            const Complex rhs = s.eval(z);
            CHECK_THAT(std::abs(lhs - rhs), WithinAbs(0.0, 1e-12 * (1 + std::abs(rhs))));
        }
    }
}

TEST_CASE("translate") {
    const Spf up = translate(f1(), Complex(0, 1));
    REQUIRE(up.poles().size() == 1);
    CHECK(up.poles()[0].location == Complex(0, 2));

    CHECK(throws_kind([] { translate(f1(), Complex(0, -1)); }, "RealPole"));

    const Spf sh = translate(f2(), Complex(1, 0));
    REQUIRE(sh.poles().size() == 2);
    CHECK(sh.poles()[0].location == Complex(1, -1));
    CHECK(sh.poles()[1].location == Complex(1, 1));

    num::Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        const Spf s = testgen::random_spf(rng, 8);
        const Spf t = translate(s, Complex(rng.uniform(-3, 3), rng.uniform(0.0, 1.0)));
        CHECK(t.order() == s.order());
    }
}

TEST_CASE("split_half_planes") {
    const auto s2 = split_half_planes(f2());
    REQUIRE(s2.has_upper());
    REQUIRE(s2.has_lower());
    CHECK(s2.upper_spf().poles()[0].location == Complex(0, 1));
    CHECK(s2.lower_spf().poles()[0].location == Complex(0, -1));

    const auto s1 = split_half_planes(f1());
    CHECK(s1.has_upper());
    CHECK_FALSE(s1.has_lower());
    CHECK(s1.upper_spf().poles() == f1().poles());

    const Spf heavy({{Complex(0, 2), 3}});
    const auto sh = split_half_planes(heavy);
    CHECK(sh.upper_spf().order() == 3);
    CHECK_FALSE(sh.has_lower());
}

TEST_CASE("split reassembles pointwise") {
    num::Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const Spf s = testgen::random_spf(rng, 9);
        const auto parts = split_half_planes(s);
        for (int j = 0; j < 100; ++j) {
            const Complex z(rng.uniform(-20, 20), 0.0);
            Complex sum = 0.0;
            if (parts.has_upper()) sum += parts.upper_spf().eval(z);
            if (parts.has_lower()) sum += parts.lower_spf().eval(z);
            const Complex whole = s.eval(z);
            CHECK_THAT(std::abs(sum - whole), WithinAbs(0.0, 1e-13 * (1 + std::abs(whole))));
        }
    }
}

TEST_CASE("conjugate-symmetric pole sets give real values on R") {
    num::Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const Spf s = testgen::random_conjugate_symmetric_spf(rng);
        for (int j = 0; j < 25; ++j) {
            const double x = rng.uniform(-15, 15);
            CHECK_THAT(s.eval(Complex(x, 0)).imag(), WithinAbs(0.0, 1e-13));
        }
    }
}

TEST_CASE("min_pole_distance") {
    CHECK_THAT(f2().min_pole_distance(Complex(0, 0)), WithinRel(1.0, 1e-15));
    CHECK_THAT(f2().min_pole_distance(Complex(3, 1)), WithinRel(3.0, 1e-15));
}
