#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "qmc/sequence.hpp"

using namespace qmc;

namespace {

// independent oracle: x_n = {n f}|_{t=b} evaluated digit by digit,
// c_k = sum_i n_i g_{k+i} mod b, truncated to m digits
std::uint64_t kronecker_direct_num(const LaurentSeries& f, std::uint64_t n, int m) {
    const std::uint32_t b = f.base;
    const auto nd = digits(n, b);
    std::uint64_t num = 0;
    for (int k = 1; k <= m; ++k) {
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < nd.size(); ++i)
            c += static_cast<std::uint64_t>(nd[i]) * f.coefficient(k + static_cast<int>(i));
        num = num * b + c % b;
    }
    return num;
}

} // namespace

TEST_CASE("digit expansion") {
    CHECK(digits(0, 2).empty());
    CHECK(digits(6, 2) == std::vector<std::uint32_t>{0, 1, 1});
    CHECK(digits(11, 3) == std::vector<std::uint32_t>{2, 0, 1});
    // reconstruction property
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t n = rng() % 1000000;
        for (std::uint32_t b : {2u, 3u, 7u}) {
            const auto d = digits(n, b);
            std::uint64_t back = 0, pw = 1;
            for (auto v : d) {
                CHECK(v < b);
                back += v * pw;
                pw *= b;
            }
            CHECK(back == n);
            if (!d.empty()) CHECK(d.back() != 0);
        }
    }
}

TEST_CASE("identity generator is the van der Corput sequence") {
    const auto g = preset("vdc", 1, 2, 8);
    CHECK(g.point(0).num[0] == 0);
    CHECK(g.point(1).value(0) == doctest::Approx(0.5));
    CHECK(g.point(2).value(0) == doctest::Approx(0.25));
    CHECK(g.point(3).value(0) == doctest::Approx(0.75));
    // cross-check against the radical-inverse formula, an independent path
    for (std::uint64_t n = 0; n < 256; ++n)
        CHECK(g.point(n).num[0] == radical_inverse_num(n, 2, 8));
}

TEST_CASE("umatrix generator example") {
    const auto g = preset("umatrix", 1, 2, 8);
    // n=3: digits (1,1) -> y = (0,1,0,...) -> 1/4
    CHECK(g.point(3).value(0) == doctest::Approx(0.25));
}

TEST_CASE("index beyond the stored precision is an error, never a wrap") {
    const auto g = preset("vdc", 1, 2, 4);
    CHECK_NOTHROW(g.point(15));
    CHECK_THROWS_AS(g.point(16), PrecisionError);
    CHECK_THROWS_AS(g.prefix(17), PrecisionError);
}

TEST_CASE("faure presets") {
    // s = 1: P^0 = identity
    const auto f1 = preset("faure", 1, 2, 6);
    CHECK(f1.matrix(0) == FieldMatrix::identity(2, 6));

    // s = 2, b = 2, m = 3: C_2 is the Pascal matrix mod 2
    const auto f2 = preset("faure", 2, 2, 3);
    const auto& c2 = f2.matrix(1);
    CHECK(c2.at(0, 0) == 1); CHECK(c2.at(0, 1) == 1); CHECK(c2.at(0, 2) == 1);
    CHECK(c2.at(1, 0) == 0); CHECK(c2.at(1, 1) == 1); CHECK(c2.at(1, 2) == 0);
    CHECK(c2.at(2, 0) == 0); CHECK(c2.at(2, 1) == 0); CHECK(c2.at(2, 2) == 1);

    CHECK_THROWS_AS(preset("faure", 3, 2, 4), DomainError); // needs b >= s
    CHECK_THROWS_AS(preset("vdc", 2, 2, 4), UsageError);
    CHECK_THROWS_AS(preset("nosuch", 1, 2, 4), UsageError);
}

TEST_CASE("faure matrices are powers of the Pascal matrix") {
    const std::uint32_t b = 5;
    const int m = 6;
    const auto g = preset("faure", 4, b, m);
    // P^(j-1) computed by repeated multiplication, an independent route
    const auto& p = g.matrix(1);
    FieldMatrix power = FieldMatrix::identity(b, m);
    for (int j = 0; j < 4; ++j) {
        CHECK(g.matrix(j) == power);
        FieldMatrix next(b, m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                std::uint64_t acc = 0;
                for (int k = 0; k < m; ++k)
                    acc += static_cast<std::uint64_t>(power.at(r, k)) * p.at(k, c);
                next.set(r, c, static_cast<std::uint32_t>(acc % b));
            }
        power = next;
    }
}

TEST_CASE("random preset is deterministic and in range") {
    const auto a = preset("random", 2, 3, 6, 99);
    const auto b = preset("random", 2, 3, 6, 99);
    const auto c = preset("random", 2, 3, 6, 100);
    CHECK(a.matrix(0) == b.matrix(0));
    CHECK(a.matrix(1) == b.matrix(1));
    CHECK(a.matrix(0) != c.matrix(0));
}

TEST_CASE("generated coordinates stay in [0,1)") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto g = preset("random", 3, 3, 5, seed);
        const auto pts = g.prefix(243);
        for (std::size_t n = 0; n < pts.size(); ++n)
            for (int j = 0; j < 3; ++j) CHECK(pts.num(n, j) < checked_pow(3, 5));
    }
}

TEST_CASE("halton examples") {
    const std::vector<std::uint32_t> bases{2, 3};
    const auto p1 = halton_point(1, bases, 4);
    CHECK(p1[0] == 8);  // 1/2 over 2^4
    CHECK(p1[1] == 27); // 1/3 over 3^4

    const auto p5 = halton_point(5, bases, 4);
    CHECK(static_cast<double>(p5[0]) / 16 == doctest::Approx(5.0 / 8));
    CHECK(static_cast<double>(p5[1]) / 81 == doctest::Approx(7.0 / 9));

    const auto p0 = halton_point(0, bases, 4);
    CHECK(p0[0] == 0);
    CHECK(p0[1] == 0);

    const std::vector<std::uint32_t> bad{2, 4};
    CHECK_THROWS_AS(halton_point(1, bad, 4), DomainError);
    const std::vector<std::uint32_t> small{1, 3};
    CHECK_THROWS_AS(halton_point(1, small, 4), DomainError);
}

TEST_CASE("halton s=1 base 2 coincides with van der Corput") {
    const auto g = preset("vdc", 1, 2, 10);
    const std::vector<std::uint32_t> bases{2};
    const auto h = halton_prefix(1024, bases, 10);
    for (std::uint64_t n = 0; n < 1024; ++n)
        CHECK(h.num(n, 0) == g.point(n).num[0]);
}

TEST_CASE("kronecker Hankel layouts") {
    LaurentSeries t1{2, 1, {1, 0, 0, 0, 0}}; // f = t^-1 to precision 5
    auto g = kronecker_matrices({t1}, 3);
    CHECK(g.matrix(0).at(0, 0) == 1);
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
            if (k + l > 0) CHECK(g.matrix(0).at(k, l) == 0);

    LaurentSeries ones{2, 1, {1, 1, 1}}; // all coefficients 1, enough for m = 2
    auto g2 = kronecker_matrices({ones}, 2);
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) CHECK(g2.matrix(0).at(k, l) == 1);

    // insufficient truncation: m = 2 needs exponents up to 3
    LaurentSeries shorty{2, 1, {1, 1}};
    CHECK_THROWS_AS(kronecker_matrices({shorty}, 2), PrecisionError);
}

TEST_CASE("kronecker f = t^-1 generates (n mod 2)/2") {
    LaurentSeries t1{2, 1, {1, 0, 0, 0, 0}};
    const auto g = kronecker_matrices({t1}, 3);
    for (std::uint64_t n = 0; n < 8; ++n)
        CHECK(g.point(n).value(0) == doctest::Approx((n % 2) / 2.0));
    CHECK(g.point(5).value(0) == doctest::Approx(0.5));
}

TEST_CASE("kronecker equivalence: Hankel route equals direct evaluation") {
    std::mt19937_64 rng(2024);
    for (std::uint32_t b : {2u, 3u}) {
        for (int trial = 0; trial < 5; ++trial) {
            const int m = 5;
            LaurentSeries f{b, 1, {}};
            f.coeff.resize(2 * m - 1);
            for (auto& c : f.coeff) c = rng() % b;
            const auto g = kronecker_matrices({f}, m);
            for (std::uint64_t n = 0; n < checked_pow(b, m); ++n)
                CHECK(g.point(n).num[0] == kronecker_direct_num(f, n, m));
        }
    }
}

TEST_CASE("interlace2 row pattern for s=1") {
    std::mt19937_64 rng(8);
    FieldMatrix c1(2, 4, 4), c2(2, 4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            c1.set(i, j, rng() & 1);
            c2.set(i, j, rng() & 1);
        }
    const auto e = interlace2({c1, c2}, 4);
    REQUIRE(e.size() == 1);
    CHECK(e[0].rows() == 8);
    CHECK(e[0].cols() == 4);
    for (int u = 0; u < 4; ++u)
        for (int l = 0; l < 4; ++l) {
            CHECK(e[0].at(2 * u, l) == c1.at(u, l));     // row 2u+1 <- c1 row u+1
            CHECK(e[0].at(2 * u + 1, l) == c2.at(u, l)); // row 2u+2 <- c2 row u+1
        }
}

TEST_CASE("interlace2 of two identities gives doubled unit rows") {
    const auto id = FieldMatrix::identity(2, 2);
    const auto e = interlace2({id, id}, 2);
    // rows: e1, e1, e2, e2
    CHECK(e[0].at(0, 0) == 1); CHECK(e[0].at(1, 0) == 1);
    CHECK(e[0].at(2, 1) == 1); CHECK(e[0].at(3, 1) == 1);
    CHECK(e[0].at(0, 1) == 0); CHECK(e[0].at(2, 0) == 0);
}

TEST_CASE("interlacing then de-interlacing recovers the inputs") {
    std::mt19937_64 rng(15);
    std::vector<FieldMatrix> cs;
    for (int i = 0; i < 4; ++i) {
        FieldMatrix c(2, 3, 3);
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t l = 0; l < 3; ++l) c.set(r, l, rng() & 1);
        cs.push_back(std::move(c));
    }
    const auto e = interlace2(cs, 3);
    REQUIRE(e.size() == 2);
    for (int j = 1; j <= 2; ++j)
        for (int u = 0; u < 3; ++u)
            for (int v = 1; v <= 2; ++v)
                for (int l = 0; l < 3; ++l)
                    CHECK(e[j - 1].at(2 * u + v - 1, l) == cs[2 * (j - 1) + v - 1].at(u, l));

    CHECK_THROWS_AS(interlace2({cs[0], cs[1], cs[2]}, 3), UsageError);
}

TEST_CASE("interlaced generator doubles the output precision") {
    const auto base = preset("faure", 2, 2, 5);
    std::vector<FieldMatrix> cs{base.matrix(0), base.matrix(1)};
    const auto g = interlaced_generator(cs, 5);
    CHECK(g.out_digits() == 10);
    CHECK(g.in_digits() == 5);
    const auto p = g.point(3);
    CHECK(p.digits == 10);
    CHECK(p.num[0] < checked_pow(2, 10));
}

TEST_CASE("point-set CSV round-trips exactly") {
    const auto pts = preset("faure", 2, 3, 4).prefix(20);
    const std::string csv = pointset_to_csv(pts);
    std::istringstream in(csv);
    const auto back = pointset_from_csv(in);
    CHECK(back.size() == pts.size());
    CHECK(back.base() == pts.base());
    for (std::size_t n = 0; n < pts.size(); ++n)
        for (int j = 0; j < 2; ++j) CHECK(back.num(n, j) == pts.num(n, j));
    CHECK(pointset_to_csv(back) == csv);

    // mixed-denominator Halton round-trip
    const std::vector<std::uint32_t> bases{2, 3};
    const auto h = halton_prefix(10, bases, 5);
    const std::string hcsv = pointset_to_csv(h);
    std::istringstream hin(hcsv);
    const auto hback = pointset_from_csv(hin);
    CHECK(pointset_to_csv(hback) == hcsv);
    CHECK(hback.denom(0) == 32);
    CHECK(hback.denom(1) == 243);
}

TEST_CASE("decimal CSV carries 17 significant digits") {
    const auto pts = preset("vdc", 1, 2, 20).prefix(3);
    const auto csv = pointset_to_csv(pts, true);
    CHECK(csv.find("0.5") != std::string::npos);
}

TEST_CASE("point set guards") {
    PointSet ps(2, 2u, 3);
    const std::vector<std::uint64_t> ok{1, 7};
    ps.append(std::span<const std::uint64_t>(ok));
    const std::vector<std::uint64_t> big{8, 0};
    CHECK_THROWS_AS(ps.append(std::span<const std::uint64_t>(big)), UsageError);
    const std::vector<std::uint64_t> wrong{1};
    CHECK_THROWS_AS(ps.append(std::span<const std::uint64_t>(wrong)), UsageError);

    const auto proj = ps.project({1});
    CHECK(proj.dim() == 1);
    CHECK(proj.num(0, 0) == 7);
    CHECK_THROWS_AS(ps.project({}), UsageError);
    CHECK_THROWS_AS(ps.project({5}), UsageError);
}

TEST_CASE("prefix and block generation agree across exec policies") {
    const auto g = preset("faure", 2, 3, 5);
    const auto a = g.prefix(100, Exec::serial);
    const auto b = g.prefix(100, Exec::parallel);
    for (std::size_t n = 0; n < 100; ++n)
        for (int j = 0; j < 2; ++j) CHECK(a.num(n, j) == b.num(n, j));
    const auto blk = g.block(81, 81, Exec::parallel);
    for (std::size_t i = 0; i < 81; ++i)
        for (int j = 0; j < 2; ++j) CHECK(blk.num(i, j) == g.point(81 + i).num[j]);
}
