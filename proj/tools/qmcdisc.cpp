// qmcdisc: construct digital sequences and measure their equidistribution
// quality (star/L2/Lp/weighted discrepancy, Haar-based norms, net structure).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmc/discrepancy.hpp"
#include "qmc/haar.hpp"
#include "qmc/net.hpp"
#include "qmc/recipes.hpp"
#include "qmc/sequence.hpp"
#include "qmc/table.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
    std::string preset = "vdc";
    std::string matrix_file;
    std::string halton_bases;
    int s = 1;
    std::uint32_t b = 2;
    int m = 16;
    std::uint64_t n = 32;
    std::uint64_t seed = 0;
    bool interlace = false;
};

void add_source_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--preset", o.preset, "vdc | identity | umatrix | faure | random");
    cmd->add_option("--matrices", o.matrix_file, "matrix file (finite-field text format)");
    cmd->add_option("--halton", o.halton_bases, "comma-separated pairwise coprime bases");
    cmd->add_option("-s,--dim", o.s, "dimension");
    cmd->add_option("-b,--base", o.b, "prime base");
    cmd->add_option("-m,--prec", o.m, "digit precision");
    cmd->add_option("-N,--count", o.n, "number of points");
    cmd->add_option("--seed", o.seed, "seed for random presets");
    cmd->add_flag("--interlace2", o.interlace, "order-2 interlacing of the generator matrices");
}

qmc::GeneratorSet make_generator(const CommonOpts& o) {
    std::vector<qmc::FieldMatrix> ms;
    if (!o.matrix_file.empty()) {
        ms = qmc::matrices_from_file(o.matrix_file);
    } else {
        const auto g = qmc::preset(o.preset, o.interlace ? 2 * o.s : o.s, o.b, o.m, o.seed);
        for (int j = 0; j < g.dim(); ++j) ms.push_back(g.matrix(j));
    }
    if (o.interlace) return qmc::interlaced_generator(ms, o.m, "interlace2");
    return qmc::GeneratorSet(std::move(ms),
                             o.matrix_file.empty() ? o.preset : o.matrix_file);
}

qmc::PointSet make_points(const CommonOpts& o) {
    if (!o.halton_bases.empty()) {
        std::vector<std::uint32_t> bases;
        std::stringstream ss(o.halton_bases);
        std::string tok;
        while (std::getline(ss, tok, ',')) bases.push_back(std::stoul(tok));
        return qmc::halton_prefix(o.n, bases, o.m);
    }
    return make_generator(o).prefix(o.n);
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        qmc::write_text_file(out_path, content);
        std::cerr << "wrote " << out_path << "\n";
    }
}

json witness_json(const std::optional<std::vector<int>>& w) {
    if (!w) return nullptr;
    return *w;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"digital sequences over prime fields and their discrepancy"};
    app.require_subcommand(1);

    std::string out_path;
    std::string format = "csv";
    app.add_option("--out", out_path, "output file or directory (default: stdout)");
    app.add_option("--format", format, "csv | json (recipes)");

    CommonOpts opt;

    // generate
    auto* gen = app.add_subcommand("generate", "emit a point-set CSV");
    add_source_flags(gen, opt);
    bool decimals = false;
    gen->add_flag("--decimals", decimals, "17-significant-digit decimals instead of fractions");

    // matrix dump
    auto* mat = app.add_subcommand("matrices", "emit generator matrices (text format)");
    add_source_flags(mat, opt);

    // tvalue
    auto* tv = app.add_subcommand("tvalue", "exact t-values up to --mmax");
    add_source_flags(tv, opt);
    int mmax = 0;
    tv->add_option("--mmax", mmax, "largest m to certify (default: precision)");

    // net
    auto* net = app.add_subcommand("net", "verify the (t,m,s)-net property");
    add_source_flags(net, opt);
    std::vector<int> vn;
    int scan_m = 0, scan_k = 0;
    net->add_option("--verify-net", vn, "t m: check the first b^m points")->expected(2);
    net->add_option("--block-scan", scan_m, "m: scan aligned b^m blocks");
    net->add_option("--blocks", scan_k, "k_max for --block-scan");

    // admissibility
    auto* adm = app.add_subcommand("admissibility", "Levin d-admissibility scan");
    add_source_flags(adm, opt);
    std::uint64_t adm_n = 0;
    adm->add_option("--prefix", adm_n, "prefix length (default: N)");

    // disc
    auto* disc = app.add_subcommand("disc", "discrepancy norms of the point set");
    add_source_flags(disc, opt);
    bool do_star = false, do_l2 = false;
    double lp_p = 0.0;
    int order = 8;
    std::uint64_t mc = 0;
    std::string gamma_file;
    disc->add_flag("--star", do_star, "exact star discrepancy");
    disc->add_flag("--l2", do_l2, "L2 discrepancy (Warnock)");
    disc->add_option("--lp", lp_p, "Lp discrepancy (inf accepted)");
    disc->add_option("--order", order, "Gauss order per cell");
    disc->add_option("--mc", mc, "Monte Carlo samples instead of cell quadrature");
    disc->add_option("--weighted", gamma_file, "weights file (one gamma per line)");

    // haar
    auto* haar = app.add_subcommand("haar", "Haar coefficient analysis");
    add_source_flags(haar, opt);
    int haar_jmax = -2, bmo_jmax = -2, bmo_l = 0, lpb_jmax = -2;
    double lpb_p = 2.0, orlicz_beta = 0.0;
    bool l2norm = false;
    haar->add_option("--haar", haar_jmax, "emit all coefficients with levels <= jmax");
    haar->add_option("--lp-bound", lpb_jmax, "truncated Littlewood-Paley RHS level cap");
    haar->add_option("--lp-p", lpb_p, "p for --lp-bound");
    haar->add_option("--bmo", bmo_jmax, "BMO shell cap jmax");
    haar->add_option("--bmo-L", bmo_l, "BMO dyadic test-box level cap");
    haar->add_option("--orlicz", orlicz_beta, "exponential Orlicz exponent beta");
    haar->add_flag("--l2-normalized", l2norm, "L2-normalized coefficients (cross-checks)");

    // recipe
    auto* rec = app.add_subcommand("recipe", "run a predefined experiment recipe");
    std::string recipe_name;
    std::string config_file;
    rec->add_option("name", recipe_name,
                    "figure1 | vdc-lp-limsup | interlaced-l2 | metrical | weighted")
        ->required();
    rec->add_option("--config", config_file, "key=value config file (flags override)");
    add_source_flags(rec, opt);
    double rec_p = 2.0, rec_delta = 1.0;
    int rec_reps = 50, rec_kmin = 4, rec_kmax = 12;
    std::string rec_variant = "matrix";
    std::vector<std::uint64_t> rec_nlist;
    rec->add_option("--p", rec_p, "Lp exponent");
    rec->add_option("--reps", rec_reps, "repetitions");
    rec->add_option("--variant", rec_variant, "matrix | kronecker");
    rec->add_option("--kmin", rec_kmin, "smallest dyadic exponent");
    rec->add_option("--kmax", rec_kmax, "largest dyadic exponent");
    rec->add_option("--delta", rec_delta, "weight decay delta");
    rec->add_option("--N-list", rec_nlist, "weighted recipe N values");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            emit(out_path, qmc::pointset_to_csv(make_points(opt), decimals));
        } else if (mat->parsed()) {
            const auto g = make_generator(opt);
            std::string text;
            for (int j = 0; j < g.dim(); ++j) text += qmc::to_text(g.matrix(j)) + "\n";
            emit(out_path, text);
        } else if (tv->parsed()) {
            const auto g = make_generator(opt);
            const int cap = mmax > 0 ? mmax : g.in_digits();
            const auto rep = qmc::exact_t(g, cap);
            json j;
            j["m_max"] = rep.m_max;
            j["t_star"] = rep.t_star;
            j["note"] = "certified for m <= m_max only";
            for (const auto& row : rep.rows)
                j["rows"].push_back({{"m", row.m}, {"t", row.t},
                                     {"witness", witness_json(row.witness)}});
            emit(out_path, j.dump(2) + "\n");
        } else if (net->parsed()) {
            const auto g = make_generator(opt);
            json j;
            if (!vn.empty()) {
                const auto pts = g.prefix(qmc::checked_pow(g.base(), vn[1]));
                const auto r = qmc::verify_net(pts, vn[0], vn[1]);
                j["t"] = vn[0];
                j["m"] = vn[1];
                j["is_net"] = r.ok;
                if (r.violation) {
                    j["violation"] = {{"shape", r.violation->shape},
                                      {"cell", r.violation->cell},
                                      {"count", r.violation->count},
                                      {"expected", r.violation->expected}};
                }
            } else if (scan_m > 0) {
                const auto r = qmc::block_net_scan(g, scan_m, scan_k);
                j["m"] = r.m;
                j["t"] = r.t;
                for (const auto& blk : r.blocks) j["blocks"].push_back(blk.ok);
                j["all_ok"] = r.all_ok();
            } else {
                throw qmc::UsageError("net: pass --verify-net t m or --block-scan m");
            }
            emit(out_path, j.dump(2) + "\n");
        } else if (adm->parsed()) {
            const auto pts = make_points(opt);
            const auto r = qmc::d_admissibility(pts, adm_n ? adm_n : pts.size());
            json j;
            j["N"] = r.n_points;
            j["admissible_prefix"] = r.admissible;
            j["d_empirical"] = r.d_empirical;
            j["infimum_exponent"] = r.min_exponent;
            j["argmin_pair"] = {r.pair_n, r.pair_k};
            j["norm_convention"] = r.norm_note;
            emit(out_path, j.dump(2) + "\n");
        } else if (disc->parsed()) {
            const auto pts = make_points(opt);
            json j;
            if (do_star) {
                const auto r = qmc::star_discrepancy_exact(pts);
                j["star"] = {{"norm", "star"},
                             {"value", r.value},
                             {"exact_fraction", qmc::fraction_string(r.exact)},
                             {"certificate", "exact rational corner enumeration over " +
                                                 std::to_string(r.corners) + " corners"}};
            }
            if (do_l2)
                j["l2"] = {{"norm", "L2"}, {"value", qmc::l2_warnock(pts)},
                           {"certificate", "Warnock closed form"}};
            if (lp_p != 0.0) {
                const bool inf_p = std::isinf(lp_p);
                const auto r = (mc > 0 && !inf_p)
                                   ? qmc::lp_monte_carlo(pts, lp_p, mc, opt.seed)
                                   : qmc::lp_quadrature(pts, lp_p, order);
                j["lp"] = {{"norm", "Lp"},
                           {"p", inf_p ? json("inf") : json(lp_p)},
                           {"value", r.value},
                           {"monte_carlo", r.monte_carlo},
                           {"std_error", r.std_error},
                           {"refinement_delta", r.refinement_delta},
                           {"certificate",
                            inf_p ? "exact star discrepancy (p = inf)"
                                  : (r.monte_carlo ? "Monte Carlo with standard error"
                                                   : "cell-exact tensor Gauss-Legendre")}};
            }
            if (!gamma_file.empty()) {
                qmc::WeightSequence w;
                std::ifstream in(gamma_file);
                if (!in) throw qmc::UsageError("cannot open weights file: " + gamma_file);
                double gv;
                while (in >> gv) w.gamma.push_back(gv);
                const auto r = qmc::weighted_star(pts, w);
                std::vector<int> subset1;
                for (int c : r.argmax_subset) subset1.push_back(c + 1);
                j["weighted_star"] = {{"norm", "weighted star"},
                                      {"value", r.value},
                                      {"exact_fraction", qmc::fraction_string(r.exact)},
                                      {"argmax_subset", subset1}};
            }
            if (j.empty()) throw qmc::UsageError("disc: pass --star, --l2, --lp or --weighted");
            emit(out_path, j.dump(2) + "\n");
        } else if (haar->parsed()) {
            const auto pts = make_points(opt);
            const auto norm = l2norm ? qmc::HaarNormalization::l2 : qmc::HaarNormalization::linf;
            json j;
            if (haar_jmax >= -1) {
                json coeffs = json::array();
                std::vector<int> lv(pts.dim(), -1);
                // odometer over level vectors, then shifts
                while (true) {
                    std::vector<std::int64_t> shift(pts.dim(), 0);
                    bool more_shifts = true;
                    while (more_shifts) {
                        qmc::HaarIndex idx{lv, shift};
                        const auto c = qmc::haar_coefficient(pts, idx, norm);
                        json e = {{"j", lv}, {"m", shift}, {"value", c.value}};
                        if (c.exact) e["exact_fraction"] = qmc::fraction_string(*c.exact);
                        coeffs.push_back(std::move(e));
                        int d = 0;
                        for (; d < pts.dim(); ++d) {
                            const std::int64_t lim = lv[d] < 0 ? 1 : (std::int64_t{1} << lv[d]);
                            if (++shift[d] < lim) break;
                            shift[d] = 0;
                        }
                        more_shifts = d < pts.dim();
                    }
                    int d = 0;
                    for (; d < pts.dim(); ++d) {
                        if (++lv[d] <= haar_jmax) break;
                        lv[d] = -1;
                    }
                    if (d == pts.dim()) break;
                }
                j["coefficients"] = std::move(coeffs);
            }
            if (lpb_jmax >= 0) {
                const auto r = qmc::littlewood_paley_rhs(pts, lpb_p, lpb_jmax);
                json shells = json::array();
                for (const auto& s : r.per_abs_level)
                    shells.push_back({{"abs_level", s.abs_level}, {"sum", s.contribution}});
                j["littlewood_paley"] = {{"p", lpb_p}, {"pbar", r.pbar},
                                         {"total", r.total}, {"last_shell", r.last_shell},
                                         {"per_shell", shells},
                                         {"note", "truncated at jmax; upper constant unknown"}};
            }
            if (bmo_jmax >= 0) {
                const auto r = qmc::bmo_seminorm_dyadic(pts, bmo_jmax, bmo_l);
                j["bmo"] = {{"value_squared", r.value},
                            {"value", std::sqrt(r.value)},
                            {"argmax_box_level", r.box_level},
                            {"argmax_box_shift", r.box_shift},
                            {"note", "certified lower bound: dyadic boxes with side >= 2^-L, "
                                     "shells truncated at jmax"}};
            }
            if (orlicz_beta > 0.0) {
                const std::vector<double> grid{1.5, 2, 3, 4, 6, 8, 12, 16};
                const auto r = qmc::orlicz_estimate(pts, orlicz_beta, grid, order);
                json terms = json::array();
                for (const auto& [pv, tv2] : r.terms) terms.push_back({{"p", pv}, {"term", tv2}});
                j["orlicz"] = {{"beta", orlicz_beta}, {"value", r.value},
                               {"argmax_p", r.argmax_p}, {"terms", terms},
                               {"note", "equivalence-class estimate; constants unknown"}};
            }
            if (j.empty())
                throw qmc::UsageError("haar: pass --haar, --lp-bound, --bmo or --orlicz");
            emit(out_path, j.dump(2) + "\n");
        } else if (rec->parsed()) {
            qmc::Config cfg;
            if (!config_file.empty()) cfg = qmc::Config::from_file(config_file);
            // flags override config values; config supplies defaults otherwise
            const int s = rec->count("--dim") ? opt.s : static_cast<int>(cfg.get_int("s", opt.s));
            const std::uint32_t b = rec->count("--base")
                                        ? opt.b
                                        : static_cast<std::uint32_t>(cfg.get_u64("b", opt.b));
            const int m = rec->count("--prec") ? opt.m : static_cast<int>(cfg.get_int("m", 10));
            const std::uint64_t nmax =
                rec->count("--count") ? opt.n : cfg.get_u64("n_max", 1024);
            const std::uint64_t seed = rec->count("--seed") ? opt.seed : cfg.get_u64("seed", 1);
            const double p = rec->count("--p") ? rec_p : cfg.get_double("p", 2.0);
            const int reps = rec->count("--reps") ? rec_reps
                                                  : static_cast<int>(cfg.get_int("reps", 50));
            const std::string variant = rec->count("--variant")
                                            ? rec_variant
                                            : cfg.get_string("variant", "matrix");

            qmc::RecipeOutput out;
            if (recipe_name == "figure1") {
                out = qmc::recipe_figure1();
            } else if (recipe_name == "vdc-lp-limsup") {
                out = qmc::recipe_vdc_lp_limsup(p, nmax);
            } else if (recipe_name == "interlaced-l2") {
                out = qmc::recipe_interlaced_l2(s, rec_kmin, rec_kmax);
            } else if (recipe_name == "metrical") {
                out = qmc::recipe_metrical(s, m, b, nmax, reps, seed, variant);
            } else if (recipe_name == "weighted") {
                std::vector<std::uint64_t> ns = rec_nlist;
                if (ns.empty()) ns = {16, 32, 64};
                out = qmc::recipe_weighted(opt.preset == "vdc" ? "halton" : opt.preset, s, ns,
                                           rec_delta);
            } else {
                throw qmc::UsageError("unknown recipe: " + recipe_name);
            }
            const std::string dir = out_path.empty() ? "." : out_path;
            for (const auto& p2 : qmc::write_outputs(out, dir, format))
                std::cerr << "wrote " << p2 << "\n";
            for (const auto& n2 : out.notes) std::cerr << "note: " << n2 << "\n";
            for (const auto& f : out.failures) std::cerr << "FAILED: " << f << "\n";
            if (!out.ok) return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
