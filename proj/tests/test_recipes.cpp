#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qmc/discrepancy.hpp"
#include "qmc/recipes.hpp"
#include "qmc/sequence.hpp"

using namespace qmc;

TEST_CASE("figure1 recipe passes its hard assertions") {
    const auto out = recipe_figure1();
    CHECK(out.ok);
    CHECK(out.failures.empty());
    REQUIRE(out.tables.size() == 1);
    const auto& t = out.tables[0].second;
    CHECK(t.row_count() == 31); // N = 2..32
    CHECK(t.cell(0, 0) == "2");
    CHECK(t.cell(0, 2) == "1/1"); // N=2 gives N*D* = 1 exactly
    REQUIRE(out.figures.size() == 1);
    CHECK(out.figures[0].second.find("<svg") != std::string::npos);

    // deterministic re-run, byte-identical CSV
    const auto again = recipe_figure1();
    CHECK(again.tables[0].second.to_csv() == t.to_csv());
}

TEST_CASE("vdc limsup recipe reports a monotone running max") {
    const auto out = recipe_vdc_lp_limsup(2.0, 128);
    CHECK(out.ok); // trend report: no assertions
    const auto& t = out.tables[0].second;
    double prev = 0.0;
    std::size_t col = 3; // running_max
    for (std::size_t r = 0; r < t.row_count(); ++r) {
        const double v = std::stod(t.cell(r, col));
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(!out.notes.empty());

    // dyadic N are markedly better than the worst N in the same table
    double runmax = 0.0, at64 = 0.0;
    for (std::size_t r = 0; r < t.row_count(); ++r) {
        runmax = std::max(runmax, std::stod(t.cell(r, 2)));
        if (t.cell(r, 0) == "64") at64 = std::stod(t.cell(r, 2));
    }
    CHECK(at64 < 0.5 * runmax);
}

TEST_CASE("interlaced recipe: scaled L2 stays bounded") {
    const auto out = recipe_interlaced_l2(1, 4, 9);
    CHECK(out.ok);
    const auto& t = out.tables[0].second;
    CHECK(t.row_count() == 6);
    // vdc comparison column present for s = 1
    CHECK(t.columns().back() == "scaled_vdc");
    // determinism
    const auto again = recipe_interlaced_l2(1, 4, 9);
    CHECK(again.tables[0].second.to_csv() == t.to_csv());
}

TEST_CASE("metrical recipe is deterministic given the seed") {
    const auto a = recipe_metrical(2, 8, 2, 64, 5, 12345, "matrix");
    const auto b = recipe_metrical(2, 8, 2, 64, 5, 12345, "matrix");
    CHECK(a.tables[0].second.to_csv() == b.tables[0].second.to_csv());
    CHECK(a.ok);

    const auto c = recipe_metrical(2, 8, 2, 64, 5, 999, "matrix");
    CHECK(c.tables[0].second.to_csv() != a.tables[0].second.to_csv());
}

TEST_CASE("metrical medians are stable across seeds") {
    const auto a = recipe_metrical(2, 10, 2, 256, 100, 1, "matrix");
    const auto b = recipe_metrical(2, 10, 2, 256, 100, 42, "matrix");
    const auto& ta = a.tables[0].second;
    const auto& tb = b.tables[0].second;
    REQUIRE(ta.row_count() == tb.row_count());
    for (std::size_t r = 0; r < ta.row_count(); ++r) {
        const double ma = std::stod(ta.cell(r, 3));
        const double mb = std::stod(tb.cell(r, 3));
        CHECK(std::abs(ma - mb) <= 0.2 * std::max(ma, mb));
    }
}

TEST_CASE("metrical kronecker variant") {
    const auto out = recipe_metrical(2, 6, 2, 32, 3, 7, "kronecker");
    CHECK(out.ok);
    CHECK(out.tables[0].first == "metrical_kronecker");
    CHECK_THROWS_AS(recipe_metrical(1, 6, 2, 32, 3, 7, "kronecker"), UsageError);
}

TEST_CASE("weighted recipe asserts the unit-weight reduction") {
    const auto out = recipe_weighted("halton", 3, {8, 16});
    CHECK(out.ok);
    const auto& t = out.tables[0].second;
    CHECK(t.row_count() == 4); // two N values x two weight families
    const auto faure = recipe_weighted("faure", 3, {9});
    CHECK(faure.ok);
}

TEST_CASE("outputs land on disk and round-trip") {
    const auto out = recipe_figure1();
    const std::string dir = "recipe_test_out";
    const auto paths = write_outputs(out, dir, "csv");
    REQUIRE(paths.size() == 2);
    std::ifstream in(paths[0]);
    REQUIRE(in.good());
    const auto back = Table::from_csv(in);
    CHECK(back == out.tables[0].second);
    std::filesystem::remove_all(dir);
}

TEST_CASE("loglog slope helper") {
    // y = x^0.5 exactly
    std::vector<double> x{16, 32, 64, 128}, y;
    for (double v : x) y.push_back(std::sqrt(v));
    CHECK(loglog_slope(x, y) == doctest::Approx(0.5));
}

TEST_CASE("first primes") {
    CHECK(first_primes(5) == std::vector<std::uint32_t>{2, 3, 5, 7, 11});
}
