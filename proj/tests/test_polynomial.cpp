#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tcpkit/polynomial.hpp"
#include "tcpkit/slice.hpp"

using namespace tcpkit;

TEST_CASE("evaluation, derivative, arithmetic") {
    const Polynomial p{1.0, -3.0, 2.0};  // 1 - 3s + 2s^2
    CHECK(p(0.0) == 1.0);
    CHECK(p(1.0) == 0.0);
    CHECK(p(2.0) == 3.0);
    const Polynomial d = p.derivative();
    CHECK(d(0.0) == -3.0);
    CHECK(d(1.0) == 1.0);
    const Polynomial q = p * Polynomial{0.0, 1.0};  // s * p
    CHECK(q(2.0) == 6.0);
    CHECK((p + q)(2.0) == 9.0);
    CHECK((p - q)(2.0) == -3.0);
    CHECK(p.degree() == 2);
    CHECK(Polynomial{}.degree() == -1);
}

TEST_CASE("roots from known factorizations") {
    // (s - 0.3)(s + 1.2)(s - 2.5)
    const Polynomial p =
        Polynomial{-0.3, 1.0} * Polynomial{1.2, 1.0} * Polynomial{-2.5, 1.0};
    const std::vector<double> r = real_roots(p, -5.0, 5.0);
    REQUIRE(r.size() == 3);
    CHECK(r[0] == doctest::Approx(-1.2).epsilon(1e-10));
    CHECK(r[1] == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(r[2] == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("double roots are reported") {
    // (s - 0.5)^2 (s + 2)
    const Polynomial p =
        Polynomial{-0.5, 1.0} * Polynomial{-0.5, 1.0} * Polynomial{2.0, 1.0};
    const std::vector<double> r = real_roots(p, -3.0, 3.0);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(r[1] == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("interval filtering") {
    const Polynomial p = Polynomial{-1.0, 1.0} * Polynomial{1.0, 1.0};  // roots +-1
    CHECK(real_roots(p, 0.0, 2.0).size() == 1);
    CHECK(real_roots(p, -2.0, 2.0).size() == 2);
    CHECK(real_roots(p, 0.5, 0.9).empty());
}

TEST_CASE("random polynomials: returned roots are genuine, none missed") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int deg = 1 + static_cast<int>(rng.below(5));
        std::vector<double> c(static_cast<std::size_t>(deg) + 1);
        for (double& v : c) v = rng.uniform(-2.0, 2.0);
        if (std::abs(c.back()) < 0.1) c.back() = 0.5;
        const Polynomial p{std::vector<double>(c)};
        const std::vector<double> roots = real_roots(p, -4.0, 4.0);
        for (double r : roots)
            CHECK(std::abs(p(r)) <= 1e-7 * std::max(1.0, p.max_abs_coeff() * std::pow(4.0, deg)));
        // every sign change over a dense grid must be matched by a root
        const int grid = 4000;
        int changes = 0;
        double prev = p(-4.0);
        for (int k = 1; k <= grid; ++k) {
            const double v = p(-4.0 + 8.0 * k / grid);
            if (prev != 0.0 && v != 0.0 && prev * v < 0.0) ++changes;
            if (v != 0.0) prev = v;
        }
        CHECK(static_cast<int>(roots.size()) >= changes);
    }
}

TEST_CASE("line restriction matches pointwise evaluation") {
    Rng rng(37);
    const tcpkit::Tensor a = testsupport::random_tensor(3, 2, rng);
    const std::vector<double> base{1.0, 0.0}, dir{0.0, 1.0};
    const std::vector<Polynomial> p = restrict_to_line(a, base, dir);
    for (double s : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
        const std::vector<double> x{1.0, s};
        const std::vector<double> v = tcpkit::apply(a, x);
        CHECK(p[0](s) == doctest::Approx(v[0]).epsilon(1e-12));
        CHECK(p[1](s) == doctest::Approx(v[1]).epsilon(1e-12));
    }
}

TEST_CASE("bivariate components and resultant") {
    // f = y^2 - x, g = y - x: eliminating y gives x^2 - x (up to sign)
    const BiPoly f{Polynomial{0.0, -1.0}, Polynomial{}, Polynomial{1.0}};
    const BiPoly g{Polynomial{0.0, -1.0}, Polynomial{1.0}};
    const Polynomial res = sylvester_resultant(f, g);
    const std::vector<double> roots = real_roots(res, -1.0, 2.0);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-10));

    Rng rng(41);
    const tcpkit::Tensor a = testsupport::random_tensor(3, 2, rng);
    const std::vector<BiPoly> comp = bivariate_components(a);
    for (double x1 : {0.3, 1.7}) {
        for (double x2 : {-0.4, 0.9}) {
            const std::vector<double> v = tcpkit::apply(a, std::vector<double>{x1, x2});
            CHECK(bipoly_eval(comp[0], x1, x2) == doctest::Approx(v[0]).epsilon(1e-12));
            CHECK(bipoly_eval(comp[1], x1, x2) == doctest::Approx(v[1]).epsilon(1e-12));
        }
    }
}

TEST_CASE("resultant roots locate common zeros of two conics") {
    // f1 = x^2 + y^2 - 2, f2 = x - y: common zeros at x = +-1
    const BiPoly f1{Polynomial{-2.0, 0.0, 1.0}, Polynomial{}, Polynomial{1.0}};
    const BiPoly f2{Polynomial{0.0, 1.0}, Polynomial{-1.0}};
    const Polynomial res = sylvester_resultant(f1, f2);
    const std::vector<double> roots = real_roots(res, -3.0, 3.0);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-10));
}
