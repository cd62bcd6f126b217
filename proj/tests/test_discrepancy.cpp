#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qmc/discrepancy.hpp"
#include "oracle_helpers.hpp"

using namespace qmc;

namespace {

PointSet single_point(std::uint64_t num, int prec) {
    PointSet p(1, 2u, prec, "single");
    const std::vector<std::uint64_t> v{num};
    p.append(std::span<const std::uint64_t>(v));
    return p;
}

} // namespace

TEST_CASE("local discrepancy examples") {
    const auto p = single_point(8, 4); // {1/2}
    const Rat64 half{1, 2}, one{1, 1}, zero{0, 1};

    const std::vector<Rat64> at_half{half};
    const auto e1 = local_discrepancy(p, std::span<const Rat64>(at_half));
    CHECK(e1.count == 0); // half-open box excludes the point
    CHECK(e1.value == doctest::Approx(-0.5));

    const std::vector<Rat64> at_one{one};
    const auto e2 = local_discrepancy(p, std::span<const Rat64>(at_one));
    CHECK(e2.count == 1);
    CHECK(e2.value == doctest::Approx(0.0));

    const std::vector<Rat64> at_zero{zero};
    const auto e3 = local_discrepancy(p, std::span<const Rat64>(at_zero));
    CHECK(e3.count == 0);
    CHECK(e3.value == doctest::Approx(0.0));

    const std::vector<Rat64> wrong{half, half};
    CHECK_THROWS_AS(local_discrepancy(p, std::span<const Rat64>(wrong)), UsageError);
}

TEST_CASE("star discrepancy of a single midpoint") {
    const auto r = star_discrepancy_exact(single_point(8, 4));
    CHECK(r.exact == BigRat(1, 2));
    CHECK(r.value == doctest::Approx(0.5));
}

TEST_CASE("star discrepancy matches the sorted formula in dimension one") {
    const auto vdc = preset("vdc", 1, 2, 12);
    for (std::uint64_t n : {2ull, 3ull, 7ull, 16ull, 33ull, 100ull}) {
        const auto pts = vdc.prefix(n);
        CHECK(star_discrepancy_exact(pts).exact == oracle::star_1d_sorted(pts));
    }
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto pts = oracle::random_dyadic_set(1, 20, 16, seed);
        CHECK(star_discrepancy_exact(pts).exact == oracle::star_1d_sorted(pts));
    }
}

TEST_CASE("power-of-two van der Corput prefixes give N * D* = 1") {
    const auto vdc = preset("vdc", 1, 2, 12);
    for (std::uint64_t n : {2ull, 4ull, 8ull, 16ull, 32ull, 64ull}) {
        const auto r = star_discrepancy_exact(vdc.prefix(n));
        CHECK(r.exact * BigRat(n) == BigRat(1));
    }
}

TEST_CASE("random 2-d sets: exact star bounded by the dense-grid oracle") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto pts = oracle::random_dyadic_set(2, 8, 10, seed);
        const double lb = oracle::dense_grid_star_lb(pts, 256);
        const auto r = star_discrepancy_exact(pts);
        CHECK(r.value >= lb - 1e-12);
        CHECK(r.value <= lb + 2.0 / 256 + 1e-12);
    }
}

TEST_CASE("sweep result equals a brute-force exact corner scan") {
    // independent oracle: evaluate every corner of the critical grid in
    // rational arithmetic, no double screening involved
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto pts = oracle::random_dyadic_set(2, 7, 8, seed * 101);
        const std::size_t n = pts.size();
        std::vector<std::vector<std::uint64_t>> grid(2);
        for (int j = 0; j < 2; ++j) {
            for (std::size_t i = 0; i < n; ++i) grid[j].push_back(pts.num(i, j));
            std::sort(grid[j].begin(), grid[j].end());
            grid[j].erase(std::unique(grid[j].begin(), grid[j].end()), grid[j].end());
            grid[j].push_back(pts.denom(j)); // the value 1
        }
        BigRat best(0);
        for (const auto y0 : grid[0])
            for (const auto y1 : grid[1]) {
                std::uint64_t open = 0, closed = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const bool o = pts.num(i, 0) < y0 && pts.num(i, 1) < y1;
                    const bool c = pts.num(i, 0) <= y0 && pts.num(i, 1) <= y1;
                    open += o;
                    closed += c;
                }
                const BigRat vol = make_rat(y0, pts.denom(0)) * make_rat(y1, pts.denom(1));
                best = std::max(best, vol - make_rat(open, n));
                best = std::max(best, make_rat(closed, n) - vol);
            }
        CHECK(star_discrepancy_exact(pts).exact == best);
    }
}

TEST_CASE("star discrepancy is invariant under point and coordinate permutations") {
    const auto pts = oracle::random_dyadic_set(2, 12, 10, 77);
    const auto base = star_discrepancy_exact(pts);

    PointSet shuffled(2, 2u, 10, "shuffled");
    const std::size_t order[] = {5, 0, 11, 3, 7, 1, 9, 2, 10, 4, 8, 6};
    for (const std::size_t i : order) {
        const std::vector<std::uint64_t> v{pts.num(i, 0), pts.num(i, 1)};
        shuffled.append(std::span<const std::uint64_t>(v));
    }
    CHECK(star_discrepancy_exact(shuffled).exact == base.exact);

    const auto swapped = pts.project({1, 0});
    CHECK(star_discrepancy_exact(swapped).exact == base.exact);
}

TEST_CASE("star discrepancy guards") {
    PointSet empty(1, 2u, 4, "empty");
    CHECK_THROWS_AS(star_discrepancy_exact(empty), UsageError);
    const auto pts = oracle::random_dyadic_set(2, 40, 10, 3);
    CHECK_THROWS_AS(star_discrepancy_exact(pts, Exec::parallel, 10), ResourceError);
}

TEST_CASE("Warnock closed form on one-point sets") {
    CHECK(l2_warnock(single_point(8, 4)) == doctest::Approx(std::sqrt(1.0 / 12)));
    CHECK(l2_warnock(single_point(0, 4)) == doctest::Approx(std::sqrt(1.0 / 3)));
}

TEST_CASE("Warnock equals cell-exact quadrature at p = 2") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const int s = 1 + static_cast<int>(seed % 3);
        const auto pts = oracle::random_dyadic_set(s, 16 + 8 * (seed % 3), 12, seed * 31);
        const double w = l2_warnock(pts);
        const double q = lp_quadrature(pts, 2.0, 4).value;
        CHECK(std::abs(w - q) < 1e-10);
    }
}

TEST_CASE("Lp quadrature closed-interval examples") {
    const auto p = single_point(8, 4);
    CHECK(lp_quadrature(p, 2.0, 8).value == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-10));
    CHECK(lp_quadrature(p, 1.0, 8).value == doctest::Approx(0.25).epsilon(1e-10));
    const auto inf = lp_quadrature(p, INFINITY, 8);
    CHECK(inf.value == doctest::Approx(0.5)); // delegates to the star discrepancy
}

TEST_CASE("Lp norms are nondecreasing in p and dominated by the star discrepancy") {
    for (std::uint64_t seed = 2; seed <= 4; ++seed) {
        const auto pts = oracle::random_dyadic_set(2, 12, 10, seed * 7);
        const double star = star_discrepancy_exact(pts).value;
        double prev = 0.0;
        for (const double p : {1.0, 2.0, 3.0, 5.0, 8.0}) {
            const double v = lp_quadrature(pts, p, 12).value;
            CHECK(v >= prev - 1e-9);
            CHECK(v <= star + 1e-9);
            prev = v;
        }
    }
}

TEST_CASE("Lp quadrature guards") {
    const auto pts = oracle::random_dyadic_set(1, 4, 8, 5);
    CHECK_THROWS_AS(lp_quadrature(pts, 0.5, 8), UsageError);
    const auto pts4 = oracle::random_dyadic_set(4, 4, 8, 5);
    CHECK_THROWS_AS(lp_quadrature(pts4, 2.0, 8), ResourceError);
    CHECK_NOTHROW(lp_monte_carlo(pts4, 2.0, 1000, 1));
}

TEST_CASE("Monte Carlo fallback approaches the quadrature value") {
    const auto pts = oracle::random_dyadic_set(2, 16, 10, 11);
    const double exact = lp_quadrature(pts, 2.0, 8).value;
    const auto mc = lp_monte_carlo(pts, 2.0, 200000, 4242);
    CHECK(mc.monte_carlo);
    CHECK(mc.std_error > 0.0);
    CHECK(std::abs(mc.value - exact) < 6 * mc.std_error + 1e-3);
}

TEST_CASE("vdC satisfies both branches of the discrepancy bound for N <= 4096") {
    const auto vdc = preset("vdc", 1, 2, 13);
    const auto pts = vdc.prefix(4096);
    for (std::uint64_t n = 2; n <= 4096; ++n) {
        const auto star = star_discrepancy_exact(pts.prefix(n), Exec::serial);
        const BigRat scaled = star.exact * BigRat(n);
        const auto b = bound_helpers(n);
        CHECK(scaled <= BigRat(b.sod));
        CHECK(to_double(scaled) <= b.bejian_faure + 1e-12);
    }
}

TEST_CASE("weighted star discrepancy examples") {
    // single midpoint in two dimensions
    PointSet p(2, 2u, 4, "mid");
    const std::vector<std::uint64_t> v{8, 8};
    p.append(std::span<const std::uint64_t>(v));

    WeightSequence w{{1.0, 0.01}};
    const auto r = weighted_star(p, w);
    CHECK(r.value == doctest::Approx(0.5)); // subset {1} wins
    CHECK(r.argmax_subset == std::vector<int>{0});

    // s = 1 reduces to gamma_1 * D*
    const auto q = single_point(8, 4);
    WeightSequence w1{{0.25}};
    CHECK(weighted_star(q, w1).value == doctest::Approx(0.125));

    // unit weights equal the plain star discrepancy exactly
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const int s = 1 + static_cast<int>(seed % 3);
        const auto pts = oracle::random_dyadic_set(s, 10, 10, seed * 13);
        const auto full = star_discrepancy_exact(pts);
        const auto ws = weighted_star(pts, WeightSequence::ones(s));
        CHECK(ws.exact == full.exact);
        CHECK(static_cast<int>(ws.argmax_subset.size()) == s);
    }
}

TEST_CASE("weighted star guards") {
    const auto pts = oracle::random_dyadic_set(2, 8, 10, 5);
    WeightSequence bad{{1.0, -1.0}};
    CHECK_THROWS_AS(weighted_star(pts, bad), UsageError);
    WeightSequence shorty{{1.0}};
    CHECK_THROWS_AS(weighted_star(pts, shorty), UsageError);
    CHECK_THROWS_AS(weighted_star(pts, WeightSequence::ones(2), Exec::parallel, 8),
                    ResourceError);
}

TEST_CASE("star discrepancy handles mixed Halton denominators") {
    const std::vector<std::uint32_t> bases{2, 3};
    const auto pts = halton_prefix(12, bases, 6);
    const double lb = oracle::dense_grid_star_lb(pts, 512);
    const auto r = star_discrepancy_exact(pts);
    CHECK(r.value >= lb - 1e-12);
    CHECK(r.value <= lb + 2.0 / 512 + 1e-12);
}

TEST_CASE("local discrepancy double-anchor overload") {
    const auto pts = preset("vdc", 1, 2, 8).prefix(4);
    const std::vector<double> anchor{0.6};
    const auto e = local_discrepancy(pts, std::span<const double>(anchor));
    CHECK(e.count == 3); // 0, 1/2, 1/4 < 0.6 <= 3/4
    CHECK(e.value == doctest::Approx(3.0 / 4 - 0.6));
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    for (int order = 1; order <= 8; ++order) {
        const auto rule = gauss_legendre(order);
        double wsum = 0.0;
        for (double w : rule.weight) wsum += w;
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        // exact through degree 2*order - 1: integral of t^d over [0,1]
        for (int d = 0; d <= 2 * order - 1; ++d) {
            double acc = 0.0;
            for (std::size_t i = 0; i < rule.node.size(); ++i)
                acc += rule.weight[i] * std::pow(rule.node[i], d);
            CHECK(acc == doctest::Approx(1.0 / (d + 1)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(gauss_legendre(0), UsageError);
}

TEST_CASE("bound helpers") {
    CHECK(digit_sum(5, 2) == 2);
    CHECK(bound_helpers(2).bejian_faure == doctest::Approx(4.0 / 3));
    for (int k = 1; k <= 10; ++k) {
        const auto b = bound_helpers(std::uint64_t{1} << k);
        CHECK(b.sod == 1);
        CHECK(b.sod_bound == doctest::Approx(std::ldexp(1.0, -k)));
    }
    CHECK(bound_helpers(11, 3).sod == 3); // 102 in base 3
}

TEST_CASE("serial and parallel discrepancy kernels agree bit-for-bit") {
    const auto pts = oracle::random_dyadic_set(2, 40, 12, 99);
    CHECK(star_discrepancy_exact(pts, Exec::serial).exact ==
          star_discrepancy_exact(pts, Exec::parallel).exact);
    CHECK(l2_warnock(pts, Exec::serial) == l2_warnock(pts, Exec::parallel));
    CHECK(lp_quadrature(pts, 3.0, 8, Exec::serial).value ==
          lp_quadrature(pts, 3.0, 8, Exec::parallel).value);
    CHECK(lp_monte_carlo(pts, 2.0, 50000, 7, Exec::serial).value ==
          lp_monte_carlo(pts, 2.0, 50000, 7, Exec::parallel).value);
}
