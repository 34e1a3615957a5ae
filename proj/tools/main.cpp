// Command-line entry point: every verification and simulation as a
// subcommand with reproducible config and machine-readable output.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ricci/asymptotics.hpp"
#include "ricci/barriers.hpp"
#include "ricci/bryant.hpp"
#include "ricci/flow.hpp"
#include "ricci/geometry.hpp"
#include "ricci/io.hpp"
#include "ricci/spectral.hpp"

using nlohmann::json;

namespace {

struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string detail;
};

struct Output {
    std::string out_dir = "out";
    bool quiet = false;
    bool json_only = false;
    std::vector<Check> checks;
    json results = json::object();
    json config = json::object();

    void check(const std::string& name, bool pass, double value,
               const std::string& detail = "") {
        checks.push_back({name, pass, value, detail});
    }

    int finish(const std::string& command) {
        json j;
        j["schema"] = 1;
        j["command"] = command;
        j["config"] = config;
        j["results"] = results;
        j["checks"] = json::array();
        bool all_pass = true;
        for (const auto& c : checks) {
            json jc;
            jc["name"] = c.name;
            jc["pass"] = c.pass;
            jc["value"] = c.value;
            if (!c.detail.empty()) jc["detail"] = c.detail;
            j["checks"].push_back(jc);
            all_pass = all_pass && c.pass;
        }
        std::filesystem::create_directories(out_dir);
        std::ofstream f(std::filesystem::path(out_dir) / "summary.json");
        f << j.dump(2) << "\n";

        if (json_only) {
            std::cout << j.dump(2) << "\n";
        } else if (!quiet) {
            for (const auto& c : checks)
                std::printf("%s  %-42s value=%.10g %s\n", c.pass ? "PASS" : "FAIL",
                            c.name.c_str(), c.value, c.detail.c_str());
        }
        return all_pass ? 0 : 1;
    }
};

int cmd_bryant(Output& out, double rho_max, double tol) {
    out.config = {{"rho_max", rho_max}, {"tol", tol}};
    const auto b = ricci::solve_bryant(rho_max, tol);
    const auto c0 = ricci::compute_C0(b);

    out.results["C0"] = c0.C0;
    out.results["C0_quad_part"] = c0.quad_part;
    out.results["c0_measured"] = c0.c0_measured;
    out.results["b0"] = ricci::kBryantB0;
    out.check("bryant.C0", std::abs(c0.C0 + 1.0) < 1e-3, c0.C0, "expected -1 +- 1e-3");
    out.check("bryant.tail_fraction_ok", !c0.tail_warning,
              std::abs(c0.tail_lo) + std::abs(c0.tail_hi));

    const double zr2 = ricci::bryant_eval(b, 30.0) * 900.0;
    out.results["rho2Z_at_30"] = zr2;
    out.check("bryant.far_field", zr2 > 0.995 && zr2 < 1.005, zr2,
              "rho^2 Z at rho=30 in [0.995, 1.005]");

    double worst = 0.0;
    for (double f = 0.02; f <= 0.2 + 1e-12; f += 0.02)
        worst = std::max(worst,
                         std::abs(ricci::bryant_eval(b, f) - (1.0 - f * f / 6.0)));
    out.results["origin_series_max_err"] = worst;
    out.check("bryant.origin_series", worst < 1e-4, worst,
              "|Z - (1 - f^2/6)| for f <= 0.2");

    // divergence identity on a fine fixed-step grid
    const auto bf = ricci::solve_bryant(std::max(30.0, rho_max), tol, 1e-3);
    const auto div = ricci::divergence_residual(bf);
    out.results["divergence_sup"] = div.sup_interior;
    out.results["divergence_boundary_hi"] = div.boundary_hi;
    out.check("bryant.divergence_interior", div.sup_interior < 1e-4, div.sup_interior);
    out.check("bryant.divergence_far_limit", std::abs(div.boundary_hi + 1.0) < 1e-2,
              div.boundary_hi, "limit -1");

    ricci::write_csv(out.out_dir + "/bryant.csv", {"rho", "Z"}, {b.rho, b.Z});
    return out.finish("bryant");
}

int cmd_barrier(Output& out, double a, double r_star, double eta) {
    out.config = {{"a", a}, {"r_star", r_star}, {"eta", eta}};
    const double rho_needed = 1.125 * std::sqrt(2.0) * a / std::sqrt(2.0) * 1.02 + 2.0;
    const auto bz = ricci::solve_bryant(std::max(35.0, rho_needed), 1e-10);
    const auto bar = ricci::build_barrier(a, bz, r_star);
    const auto rep = ricci::supersolution_residual(bar, eta);

    out.results["window"] = {rep.window_lo, rep.window_hi};
    out.results["sup_in_window"] = rep.sup_in_window;
    out.results["first_violation_u"] = rep.first_violation_u;
    out.check("barrier.negative_in_window", rep.negative_in_window, rep.sup_in_window,
              "strict supersolution sign");

    // leading-term match against a^-2 (2u^-2 - 1) near the cylinder radius
    double cfit = 0.0;
    for (std::size_t i = 0; i < bar.u.size(); ++i) {
        const double u = bar.u[i];
        if (u < std::sqrt(2.0) - eta || u > std::sqrt(2.0) + eta) continue;
        const double lead = (2.0 / (u * u) - 1.0) / (a * a);
        cfit = std::max(cfit, std::abs(bar.Ya[i] - lead) * a * a * a * a);
    }
    out.results["leading_term_C"] = cfit;
    out.check("barrier.leading_term", cfit < 20.0, cfit,
              "|Ya - a^-2(2u^-2-1)| <= C a^-4, C fitted");

    ricci::write_csv(out.out_dir + "/barrier.csv", {"u", "Ya"}, {bar.u, bar.Ya});
    ricci::write_csv(out.out_dir + "/barrier_residual.csv", {"u", "residual"},
                     {rep.u, rep.residual});
    return out.finish("barrier");
}

int cmd_spectral(Output& out, int nodes, double tau) {
    out.config = {{"nodes", nodes}, {"tau", tau}};

    if (tau < 0.0) {
        // spectral state of the near-cylinder slope law at this tau
        const double at = std::abs(tau);
        const int n = 5601;
        std::vector<double> sigma(n), v(n);
        ricci::HermiteBasis basis(2);
        for (int i = 0; i < n; ++i) {
            sigma[i] = -14.0 + 28.0 * i / double(n - 1);
            v[i] = -basis.h(2)(sigma[i]) / (8.0 * at);
        }
        const double delta = std::sqrt(2.0) / (4.0 * at);
        const ricci::Cutoff cut(delta);
        const auto vbar = ricci::truncate(sigma, v, cut);
        const auto pr = ricci::project_sampled(sigma, vbar);
        const auto ef = ricci::error_functionals(sigma, v, vbar, cut);
        out.results["state"] = {{"tau", tau},
                                {"alpha", pr.alpha},
                                {"alpha_raw", pr.alpha_raw},
                                {"plus", pr.plus},
                                {"minus_norm", pr.minus_norm},
                                {"delta", delta},
                                {"support_radius", cut.support_radius()},
                                {"pairings",
                                 {{"E", ef.pair_E},
                                  {"E_chi", ef.pair_chi},
                                  {"E_nl", ef.pair_nl},
                                  {"quad_form", ef.quad_form}}}};
        out.check("spectral.state_alpha_negative", pr.alpha < 0.0, pr.alpha);
    }
    const auto rep = ricci::hermite_identities(nodes);
    out.results["cubic_integral"] = rep.cubic_integral;
    out.results["cubic_expected"] = rep.cubic_expected;
    out.check("spectral.h2_squared_identity", rep.sq_identity_exact, 0.0,
              "h2^2 = h4 + 8 h2 + 8 h0 (exact)");
    out.check("spectral.h2_deriv_identity", rep.deriv_identity_exact, 0.0,
              "(h2')^2 = 4 h2 + 8 h0 (exact)");
    out.check("spectral.cubic_pairing", rep.cubic_rel_err < 1e-8, rep.cubic_rel_err,
              "int (h2^3/2 + (h2')^2 h2) dmu = 8 ||h2||^2");

    ricci::HermiteBasis basis(12);
    const ricci::GaussHermite rule(nodes);
    double worst_orth = 0.0, worst_eig = 0.0;
    for (int kj = 0; kj <= 12; kj += 2) {
        const auto& hj = basis.h(kj);
        const auto lh = ricci::apply_L(hj);
        const double lam = 1.0 - kj / 2;
        auto diff = [&](double s) { return lh(s) - lam * hj(s); };
        const double num = std::sqrt(std::max(0.0, ricci::weighted_inner(diff, diff, rule)));
        worst_eig = std::max(worst_eig, num / std::sqrt(ricci::HermiteBasis::norm_sq(kj)));
        for (int kk = kj + 2; kk <= 12; kk += 2) {
            const auto& hk = basis.h(kk);
            const double ip = ricci::weighted_inner(
                [&](double s) { return hj(s); }, [&](double s) { return hk(s); }, rule);
            worst_orth = std::max(
                worst_orth, std::abs(ip) / std::sqrt(ricci::HermiteBasis::norm_sq(kj) *
                                                     ricci::HermiteBasis::norm_sq(kk)));
        }
    }
    out.results["max_orthogonality_defect"] = worst_orth;
    out.results["max_eigen_defect"] = worst_eig;
    out.check("spectral.orthogonality", worst_orth < 1e-10, worst_orth);
    out.check("spectral.eigen_relation", worst_eig < 1e-10, worst_eig);
    return out.finish("spectral");
}

int cmd_flow(Output& out, const ricci::FlowConfig& cfg) {
    out.config = {{"fixture", cfg.fixture}, {"r", cfg.r},     {"neck", cfg.neck},
                  {"bulb", cfg.bulb},       {"n", cfg.n},     {"dt_factor", cfg.dt_factor},
                  {"t_end", cfg.t_end},     {"output_every", cfg.output_every},
                  {"symmetric", cfg.symmetric}};
    ricci::FlowConfig run_cfg = cfg;
    run_cfg.output_dir = out.out_dir;
    const auto run = ricci::run_flow(run_cfg);
    ricci::write_profile_csv(out.out_dir + "/final_profile.csv", run.final_profile);
    ricci::write_curvature_csv(out.out_dir + "/final_curvatures.csv", run.final_profile,
                               ricci::curvatures(run.final_profile));

    double q_max = 0.0;
    bool r_at_tip = true;
    json mons = json::array();
    for (const auto& m : run.monitors) {
        q_max = std::max(q_max, m.Q_max);
        r_at_tip = r_at_tip && m.R_max_at_tip;
        mons.push_back({{"t", m.t},
                        {"tau", m.tau},
                        {"Q_max", m.Q_max},
                        {"R_max", m.R_max},
                        {"R_max_at_tip", m.R_max_at_tip},
                        {"psi_max", m.psi_max},
                        {"psi_min", m.psi_min},
                        {"J_tip", std::isfinite(m.J_tip) ? json(m.J_tip) : json()},
                        {"kappa", std::isfinite(m.kappa) ? json(m.kappa) : json()}});
    }
    out.results["monitors"] = mons;
    out.results["T_estimate"] = run.T_estimate;
    out.results["t_final"] = run.t_final;
    out.results["extinct"] = run.extinct;
    out.check("flow.Q_max_bound", q_max <= 1.0 + 1e-3, q_max, "Q <= 1 + 1e-3");
    if (cfg.fixture == "dumbbell")
        out.check("flow.R_max_at_tips", r_at_tip, r_at_tip ? 1.0 : 0.0);
    return out.finish("flow");
}

int cmd_residual(Output& out, const std::string& region_name,
                 std::vector<double> ladder, double L, double theta) {
    out.config = {{"region", region_name}, {"tau_ladder", ladder}, {"L", L},
                  {"theta", theta}};
    ricci::Region region = ricci::Region::Parabolic;
    if (region_name == "intermediate") region = ricci::Region::Intermediate;
    else if (region_name == "tip") region = ricci::Region::Tip;
    else if (region_name != "parabolic")
        throw CLI::ValidationError("region must be parabolic|intermediate|tip");

    double max_tau = 0.0;
    for (double t : ladder) max_tau = std::max(max_tau, std::abs(t));
    const ricci::MatchedAnsatz base{-max_tau, L, theta, 0.0, 0.0, 0.0, 0.1};
    const auto bz = ricci::solve_bryant(std::max(35.0, std::sqrt(max_tau) * (theta + 0.2) * 1.1),
                                        1e-10);
    const auto rep = ricci::pde_residual(region, ladder, base, bz);

    out.results["tau_ladder"] = rep.tau_ladder;
    out.results["sup_norm"] = rep.sup_norm;
    out.results["fitted_exponent"] = rep.fitted_exponent;
    if (region == ricci::Region::Parabolic)
        out.check("residual.parabolic_exponent", rep.fitted_exponent >= 1.7,
                  rep.fitted_exponent, "decay at least |tau|^-1.7");
    else
        out.check("residual.decays", rep.sup_norm.back() < rep.sup_norm.front(),
                  rep.fitted_exponent);
    return out.finish("residual");
}

int cmd_predict(Output& out, double t) {
    out.config = {{"t", t}};
    const auto p = ricci::predictions(t);
    out.results["k"] = p.k;
    out.results["d"] = p.d;
    out.results["kappa_dictionary"] = p.k * std::abs(t);  // = log|t|
    out.check("predict.domain", true, p.k);
    return out.finish("predict");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotationally symmetric Ricci flow laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config");

    Output out;
    app.add_option("--out", out.out_dir, "output directory");
    app.add_flag("--quiet", out.quiet, "suppress console report");
    app.add_flag("--json-only", out.json_only, "print summary JSON only");

    double rho_max = 50.0, tol = 1e-10;
    auto* bry = app.add_subcommand("bryant", "solve the steady soliton profile");
    bry->add_option("--rho-max", rho_max);
    bry->add_option("--tol", tol);

    double a = 50.0, r_star = 2.0, eta = 0.1;
    auto* bar = app.add_subcommand("barrier", "build and test a comparison curve");
    bar->add_option("--a", a);
    bar->add_option("--r-star", r_star);
    bar->add_option("--eta", eta);

    int nodes = 64;
    bool identities = true;
    double spectral_tau = 0.0;  // negative: also report the state at this tau
    auto* spec = app.add_subcommand("spectral", "Hermite identity suite");
    spec->add_flag("--identities", identities);
    spec->add_option("--nodes", nodes);
    spec->add_option("--tau", spectral_tau);

    ricci::FlowConfig fcfg;
    auto* flow = app.add_subcommand("flow", "time-step a fixture");
    flow->add_option("--fixture", fcfg.fixture);
    flow->add_option("--r", fcfg.r);
    flow->add_option("--neck", fcfg.neck);
    flow->add_option("--bulb", fcfg.bulb);
    flow->add_option("--barrel", fcfg.barrel);
    flow->add_option("--n,--n-sigma", fcfg.n);
    flow->add_option("--dt-factor", fcfg.dt_factor);
    flow->add_option("--t-end", fcfg.t_end);
    flow->add_option("--output-every", fcfg.output_every);
    flow->add_flag("--symmetric,--symmetry,!--no-symmetric", fcfg.symmetric);

    std::string region = "parabolic";
    std::vector<double> ladder{100, 200, 400, 800};
    double L = 5.0, theta = 0.3;
    auto* res = app.add_subcommand("residual", "ansatz equation-residual harness");
    res->add_option("--region", region);
    res->add_option("--tau-ladder", ladder)->delimiter(',');
    res->add_option("--L", L);
    res->add_option("--theta", theta);

    double t_pred = -1e6;
    auto* pred = app.add_subcommand("predict", "curvature/diameter laws");
    pred->add_option("--t", t_pred);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bry->parsed()) return cmd_bryant(out, rho_max, tol);
        if (bar->parsed()) return cmd_barrier(out, a, r_star, eta);
        if (spec->parsed()) return cmd_spectral(out, nodes, spectral_tau);
        if (flow->parsed()) return cmd_flow(out, fcfg);
        if (res->parsed()) return cmd_residual(out, region, ladder, L, theta);
        if (pred->parsed()) return cmd_predict(out, t_pred);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
