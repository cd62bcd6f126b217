#include "qmc/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "qmc/discrepancy.hpp"
#include "qmc/net.hpp"
#include "qmc/rational.hpp"
#include "qmc/sequence.hpp"

namespace qmc {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// L2 discrepancy of every prefix of a 1-d point list via incremental Warnock
// sums; O(N) per added point.
std::vector<double> l2_prefix_series(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> out(n);
    long double s1 = 0.0L, pairs = 0.0L;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = x[k];
        s1 += (1.0 - v * v) / 2.0;
        long double cross = 0.0L;
        for (std::size_t i = 0; i < k; ++i) cross += 1.0 - std::max(x[i], v);
        pairs += 2.0L * cross + (1.0 - v);
        const long double nn = static_cast<long double>(k + 1);
        long double l2sq = 1.0L / 3.0L - 2.0L / nn * s1 + pairs / (nn * nn);
        if (l2sq < 0) l2sq = 0;
        out[k] = static_cast<double>(std::sqrt(l2sq));
    }
    return out;
}

std::vector<double> quantiles(std::vector<double> v, std::initializer_list<double> qs) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double q : qs) {
        const std::size_t i = static_cast<std::size_t>(q * (v.size() - 1));
        out.push_back(v[i]);
    }
    return out;
}

} // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw UsageError("slope needs two equally sized samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<std::uint32_t> first_primes(int n) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 2; static_cast<int>(out.size()) < n; ++c)
        if (is_prime(c)) out.push_back(c);
    return out;
}

RecipeOutput recipe_figure1(Exec exec) {
    RecipeOutput out;
    out.name = "figure1";
    const auto gen = preset("vdc", 1, 2, 16);
    const auto pts = gen.prefix(32, exec);

    Table t({"N", "N_Dstar", "N_Dstar_frac", "bejian_faure", "S2", "is_pow2"});
    std::vector<double> xs, nd, bf, s2;
    for (std::uint64_t n = 2; n <= 32; ++n) {
        const auto star = star_discrepancy_exact(pts.prefix(n), exec);
        const BigRat scaled = star.exact * BigRat(n);
        const auto bounds = bound_helpers(n);
        const bool pow2 = (n & (n - 1)) == 0;

        if (pow2 && scaled != BigRat(1))
            out.fail("N=" + std::to_string(n) + ": N*D* = " + fraction_string(scaled) +
                     " but a power of two must give exactly 1");
        if (scaled > BigRat(bounds.sod))
            out.fail("N=" + std::to_string(n) + ": N*D* exceeds the sum-of-digits bound");
        if (to_double(scaled) > bounds.bejian_faure + 1e-12)
            out.fail("N=" + std::to_string(n) + ": N*D* exceeds log N/(3 log 2) + 1");

        xs.push_back(static_cast<double>(n));
        nd.push_back(to_double(scaled));
        bf.push_back(bounds.bejian_faure);
        s2.push_back(static_cast<double>(bounds.sod));
        t.add_row({fmt_u64(n), fmt_double(to_double(scaled)), fraction_string(scaled),
                   fmt_double(bounds.bejian_faure), fmt_u64(bounds.sod), pow2 ? "1" : "0"});
    }
    out.tables.push_back({"figure1", std::move(t)});
    out.figures.push_back(
        {"figure1", line_chart_svg("N * D_N^* of van der Corput (base 2)", xs,
                                   {{"N*D*", nd, "#1f77b4", true},
                                    {"log N/(3 log 2)+1", bf, "#d62728", false},
                                    {"S2(N)", s2, "#2ca02c", false}})});
    return out;
}

RecipeOutput recipe_vdc_lp_limsup(double p, std::uint64_t n_max, Exec exec) {
    RecipeOutput out;
    out.name = "vdc_lp_limsup";
    out.notes.push_back("limsup N*L_p/log N = 1/(6 log 2) is asymptotic - not asserted");
    if (n_max < 2 || n_max > (1u << 14)) throw UsageError("n_max must be in [2, 2^14]");

    const auto gen = preset("vdc", 1, 2, 16);
    const auto pts = gen.prefix(n_max, exec);
    std::vector<double> x(n_max);
    for (std::uint64_t i = 0; i < n_max; ++i) x[i] = pts.value(i, 0);

    std::vector<double> lp(n_max);
    if (p == 2.0) {
        lp = l2_prefix_series(x);
    } else {
#pragma omp parallel for schedule(dynamic, 16) if (exec == Exec::parallel)
        for (std::int64_t n = 1; n <= static_cast<std::int64_t>(n_max); ++n)
            lp[n - 1] = lp_quadrature(pts.prefix(n), p, 6, Exec::serial).value;
    }

    const double target = 1.0 / (6.0 * std::log(2.0));
    Table t({"N", "Lp", "scaled", "running_max", "ratio_to_limsup"});
    double runmax = 0.0;
    std::uint64_t argmax = 2;
    for (std::uint64_t n = 2; n <= n_max; ++n) {
        const double scaled = n * lp[n - 1] / std::log(static_cast<double>(n));
        if (scaled > runmax) {
            runmax = scaled;
            argmax = n;
        }
        t.add_row({fmt_u64(n), fmt_double(lp[n - 1]), fmt_double(scaled), fmt_double(runmax),
                   fmt_double(runmax / target)});
    }
    out.tables.push_back({"vdc_lp_limsup", std::move(t)});
    out.notes.push_back("running max " + fmt_double(runmax) + " at N=" + fmt_u64(argmax) +
                        "; 1/(6 log 2) = " + fmt_double(target) +
                        "; ratio = " + fmt_double(runmax / target));
    return out;
}

RecipeOutput recipe_interlaced_l2(int s, int k_min, int k_max, Exec exec) {
    RecipeOutput out;
    out.name = "interlaced_l2";
    out.notes.push_back("boundedness of the scaled L2 is the asserted trend; "
                        "the bound's constant is unknown");
    if (s < 1 || s > 3) throw UsageError("interlaced recipe supports s in [1, 3]");
    if (k_min < 2 || k_max > 14 || k_min >= k_max)
        throw UsageError("need 2 <= k_min < k_max <= 14");

    const int d = 2 * s;
    const std::uint32_t b = 2;
    if (b < static_cast<std::uint32_t>(d))
        throw UsageError("order-2 interlacing in base 2 needs a (t,d)-base sequence; "
                         "Faure requires b >= d, so s must be 1 here");
    const int m = k_max + 1;
    const auto base_gen = preset("faure", d, b, m);
    std::vector<FieldMatrix> cs;
    for (int j = 0; j < d; ++j) cs.push_back(base_gen.matrix(j));
    const auto gen = interlaced_generator(cs, m, "interlace2(faure)");
    const auto pts = gen.prefix(std::uint64_t{1} << k_max, exec);

    const auto vdc_gen = preset("vdc", 1, 2, m);
    const auto vdc_pts = s == 1 ? vdc_gen.prefix(std::uint64_t{1} << k_max, exec)
                                : PointSet(1, 2u, 1);

    Table t({"k", "N", "L2_interlaced", "scaled_interlaced", "L2_vdc", "scaled_vdc"});
    std::vector<double> ns, scaled_i, scaled_v;
    for (int k = k_min; k <= k_max; ++k) {
        const std::uint64_t n = std::uint64_t{1} << k;
        const double l2i = l2_warnock(pts.prefix(n), exec);
        const double si = n * l2i / std::pow(std::log(static_cast<double>(n)), s / 2.0);
        ns.push_back(static_cast<double>(n));
        scaled_i.push_back(si);
        std::string l2v = "-", sv = "-";
        if (s == 1) {
            const double l2 = l2_warnock(vdc_pts.prefix(n), exec);
            const double sc = n * l2 / std::sqrt(std::log(static_cast<double>(n)));
            scaled_v.push_back(sc);
            l2v = fmt_double(l2);
            sv = fmt_double(sc);
        }
        t.add_row({fmt_int(k), fmt_u64(n), fmt_double(l2i), fmt_double(si), l2v, sv});
    }

    const double slope_i = loglog_slope(ns, scaled_i);
    out.notes.push_back("interlaced log-log slope = " + fmt_double(slope_i));
    if (slope_i > 0.05)
        out.fail("interlaced scaled L2 shows a growth trend: slope " + fmt_double(slope_i));
    if (s == 1) {
        const double slope_v = loglog_slope(ns, scaled_v);
        out.notes.push_back("vdc log-log slope = " + fmt_double(slope_v));
    }
    out.tables.push_back({"interlaced_l2", std::move(t)});
    return out;
}

RecipeOutput recipe_metrical(int s, int m, std::uint32_t base, std::uint64_t n_max,
                             int reps, std::uint64_t seed, const std::string& variant,
                             Exec exec) {
    RecipeOutput out;
    out.name = "metrical";
    out.notes.push_back("metrical theorems are almost-sure asymptotic statements; "
                        "this distribution summary is exploratory only");
    if (reps < 1 || reps > 1000) throw UsageError("reps must be in [1, 1000]");
    if (s < 1 || s > 3) throw UsageError("metrical recipe supports s in [1, 3]");
    if (variant != "matrix" && variant != "kronecker")
        throw UsageError("variant must be 'matrix' or 'kronecker'");
    if (variant == "kronecker" && s < 2)
        throw UsageError("the kronecker variant needs s >= 2 (its scaling uses log s)");

    std::vector<std::uint64_t> n_values;
    for (std::uint64_t n = 4; n <= n_max; n *= 2) n_values.push_back(n);
    if (n_values.empty()) throw UsageError("n_max too small");

    int rejected = 0;
    std::vector<std::vector<double>> scaled(n_values.size());
    for (int rep = 0; rep < reps; ++rep) {
        PointSet pts(1, 2u, 1);
        if (variant == "matrix") {
            // full-rank rejection: degenerate draws (e.g. zero matrices) are excluded
            std::uint64_t draw = splitmix64(seed + rep);
            while (true) {
                const auto g = preset("random", s, base, m, draw);
                bool ok = true;
                for (int j = 0; j < s && ok; ++j)
                    ok = g.matrix(j).rank() == static_cast<std::size_t>(m);
                if (ok) {
                    pts = g.prefix(n_max, exec);
                    break;
                }
                ++rejected;
                draw = splitmix64(draw);
            }
        } else {
            std::vector<LaurentSeries> f(s);
            std::uint64_t h = splitmix64(seed + rep) ^ 0x5eedull;
            for (int j = 0; j < s; ++j) {
                f[j].base = base;
                f[j].start = 1;
                const std::size_t len = n_max + m + 1;
                f[j].coeff.resize(len);
                for (std::size_t i = 0; i < len; ++i) {
                    h = splitmix64(h);
                    f[j].coeff[i] = static_cast<std::uint32_t>(h % base);
                }
            }
            PointSet kp(s, base, m, "kronecker-shift");
            for (std::uint64_t n = 0; n < n_max; ++n)
                kp.append(kronecker_shift_point(f, n, m));
            pts = std::move(kp);
        }

        for (std::size_t i = 0; i < n_values.size(); ++i) {
            const std::uint64_t n = n_values[i];
            const double dstar = star_discrepancy_exact(pts.prefix(n), exec).value;
            double sc;
            if (variant == "matrix") {
                sc = n * dstar / std::pow(std::log(static_cast<double>(n)), s);
            } else {
                sc = dstar / (std::sqrt(s * std::log(static_cast<double>(s)) / n) *
                              std::log(static_cast<double>(n)));
            }
            scaled[i].push_back(sc);
        }
    }
    if (rejected > 0)
        out.notes.push_back(std::to_string(rejected) +
                            " rank-deficient draws rejected and resampled");

    Table t({"N", "q0", "q25", "median", "q75", "q100"});
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        const auto q = quantiles(scaled[i], {0.0, 0.25, 0.5, 0.75, 1.0});
        t.add_row({fmt_u64(n_values[i]), fmt_double(q[0]), fmt_double(q[1]), fmt_double(q[2]),
                   fmt_double(q[3]), fmt_double(q[4])});
    }
    out.tables.push_back({"metrical_" + variant, std::move(t)});
    return out;
}

RecipeOutput recipe_weighted(const std::string& which, int s,
                             const std::vector<std::uint64_t>& n_list, double delta,
                             Exec exec) {
    RecipeOutput out;
    out.name = "weighted";
    out.notes.push_back("tractability exponents are not desk-verifiable; "
                        "table is a trend report");
    if (s < 1 || s > 10) throw UsageError("weighted recipe supports s in [1, 10]");
    if (which != "halton" && which != "faure")
        throw UsageError("sequence preset must be 'halton' or 'faure'");
    if (n_list.empty()) throw UsageError("need at least one N");

    const std::uint64_t n_max = *std::max_element(n_list.begin(), n_list.end());
    int m = 1;
    std::uint32_t b = 2;
    PointSet pts(1, 2u, 1);
    if (which == "halton") {
        const auto bases = first_primes(s);
        m = 1;
        // enough digits in the smallest base to keep radical inverses distinct
        while (checked_pow(2, m) < n_max * 4) ++m;
        pts = halton_prefix(n_max, bases, m, exec);
    } else {
        while (!is_prime(b) || b < static_cast<std::uint32_t>(s)) ++b;
        m = 1;
        while (checked_pow(b, m) < n_max) ++m;
        m += 2;
        pts = preset("faure", s, b, m).prefix(n_max, exec);
    }

    WeightSequence decay{std::vector<double>(s)}, harmonic{std::vector<double>(s)};
    for (int j = 0; j < s; ++j) {
        decay.gamma[j] = std::pow(static_cast<double>(j + 1), -(2.0 + delta));
        harmonic.gamma[j] = 1.0 / static_cast<double>(j + 1);
    }

    auto subset_str = [](const std::vector<int>& u) {
        std::string r = "{";
        for (std::size_t i = 0; i < u.size(); ++i)
            r += (i ? ";" : "") + std::to_string(u[i] + 1);
        return r + "}";
    };

    Table t({"N", "family", "N_weighted_Dstar", "argmax_subset"});
    for (const std::uint64_t n : n_list) {
        const auto prefix = pts.prefix(n);

        // gamma = 1 must reduce exactly to the plain star discrepancy
        const auto plain = star_discrepancy_exact(prefix, exec);
        const auto ones = weighted_star(prefix, WeightSequence::ones(s), exec);
        if (ones.exact != plain.exact)
            out.fail("N=" + std::to_string(n) +
                     ": weighted star with unit weights != star discrepancy");

        const auto wd = weighted_star(prefix, decay, exec);
        t.add_row({fmt_u64(n), "j^-(2+delta)", fmt_double(n * wd.value),
                   subset_str(wd.argmax_subset)});
        const auto wh = weighted_star(prefix, harmonic, exec);
        t.add_row({fmt_u64(n), "1/j", fmt_double(n * wh.value),
                   subset_str(wh.argmax_subset)});
    }
    out.tables.push_back({"weighted_" + which, std::move(t)});
    return out;
}

std::vector<std::string> write_outputs(const RecipeOutput& out, const std::string& out_dir,
                                       const std::string& format) {
    if (format != "csv" && format != "json")
        throw UsageError("format must be csv or json");
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> paths;
    for (const auto& [name, table] : out.tables) {
        const std::string path = out_dir + "/" + name + "." + format;
        write_text_file(path, format == "csv" ? table.to_csv() : table.to_json());
        paths.push_back(path);
    }
    for (const auto& [name, svg] : out.figures) {
        const std::string path = out_dir + "/" + name + ".svg";
        write_text_file(path, svg);
        paths.push_back(path);
    }
    return paths;
}

} // namespace qmc
