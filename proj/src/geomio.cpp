#include "kforge/geomio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "kforge/parallel.hpp"

namespace kforge {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

Json to_json(const ProfileParams& p) {
    Json j;
    j["n"] = p.n;
    j["k"] = p.k;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["gamma"] = p.gamma;
    j["eps"] = p.eps;
    j["alpha_tilde"] = p.alpha_tilde;
    j["beta_tilde"] = p.beta_tilde;
    j["blend_width"] = p.blend_width;
    return j;
}

Json to_json(const RunConfig& c) {
    Json j;
    j["profile"] = to_json(c.profile);
    j["cantor_depth"] = c.cantor_depth;
    j["cantor_ratio"] = c.cantor_ratio;
    j["delta0"] = c.delta0;
    j["l0"] = c.l0;
    j["alpha0"] = c.alpha0;
    j["t_init"] = c.t_init;
    j["zero_tol"] = c.zero_tol;
    return j;
}

Json to_json(const GridSpec& g) {
    Json j;
    j["nu"] = g.nu;
    j["nv"] = g.nv;
    j["margin"] = g.margin;
    j["u0"] = g.u0;
    j["u1"] = g.u1;
    j["v0"] = g.v0;
    j["v1"] = g.v1;
    return j;
}

Json to_json(const ZeroSetReport& r) {
    Json j;
    j["grid"] = to_json(r.grid);
    j["tol"] = r.tol;
    j["zero_count"] = r.zero_count;
    j["positive_count"] = r.positive_count;
    j["negative_count"] = r.negative_count;
    j["zero_v_min"] = r.zero_v_min;
    j["zero_v_max"] = r.zero_v_max;
    Json neg = Json::array();
    for (const auto& p : r.negative_points) neg.push_back({p[0], p[1], p[2]});
    j["negative_points"] = neg;
    return j;
}

Json to_json(const CalibrationReport& r) {
    Json j;
    j["t"] = r.t;
    j["min_target_h"] = r.min_target_h;
    j["global_min_h"] = r.global_min_h;
    j["worst_u"] = r.worst_u;
    j["worst_v"] = r.worst_v;
    j["halvings"] = r.halvings;
    return j;
}

Json to_json(const CantorPlan& plan) {
    Json j;
    j["delta0"] = plan.delta0;
    j["base_arc_len"] = plan.base_arc_len;
    j["ratio"] = plan.ratio;
    j["shrink"] = plan.shrink;
    Json balls = Json::array();
    for (size_t i = 0; i < plan.balls.size(); ++i) {
        Json b;
        b["center_angle"] = plan.balls[i].center_angle();
        b["radius_rad"] = plan.balls[i].radius_rad;
        b["depth"] = plan.depths[i];
        balls.push_back(b);
    }
    j["balls"] = balls;
    return j;
}

Json to_json(const FractalReport& r) {
    Json j;
    j["upto"] = r.upto;
    j["grid"] = to_json(r.grid);
    j["tol"] = r.tol;
    j["zero_count"] = r.zero_count;
    j["positive_count"] = r.positive_count;
    j["negative_count"] = r.negative_count;
    j["flat_violations"] = r.flat_violations;
    j["ball_violations"] = r.ball_violations;
    j["hausdorff_cells"] = r.hausdorff_cells;
    j["ok"] = r.ok;
    j["worst_u"] = r.worst_u;
    j["worst_v"] = r.worst_v;
    return j;
}

void export_obj(const ImmersionMap& m, const GridSpec& grid, const std::string& path) {
    grid.validate();
    const std::int64_t total = static_cast<std::int64_t>(grid.nu) * grid.nv;
    std::vector<Eigen::Vector3d> verts(total);
    std::vector<double> curv(total);
    parallel_for(total, [&](std::int64_t idx) {
        const int j = static_cast<int>(idx / grid.nu);
        const int i = static_cast<int>(idx % grid.nu);
        const double u = grid.u_at(i), v = grid.v_at(j);
        verts[idx] = m(u, v);
        curv[idx] = chart_curvature(m, u, v);
    });

    std::ofstream obj(path);
    if (!obj) throw std::runtime_error("export_obj: cannot open " + path);
    for (const auto& p : verts)
        obj << "v " << fmt(p[0]) << ' ' << fmt(p[1]) << ' ' << fmt(p[2]) << '\n';
    const int ni = grid.wraps_u() ? grid.nu : grid.nu - 1;
    for (int j = 0; j + 1 < grid.nv; ++j)
        for (int i = 0; i < ni; ++i) {
            const int i2 = (i + 1) % grid.nu;
            obj << "f " << (j * grid.nu + i + 1) << ' ' << (j * grid.nu + i2 + 1) << ' '
                << ((j + 1) * grid.nu + i2 + 1) << ' ' << ((j + 1) * grid.nu + i + 1)
                << '\n';
        }
    if (!obj) throw std::runtime_error("export_obj: write failure on " + path);

    std::ofstream csv(path + ".curvature.csv");
    if (!csv) throw std::runtime_error("export_obj: cannot open " + path + ".curvature.csv");
    csv << "u,v,H\n";
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const int j = static_cast<int>(idx / grid.nu);
        const int i = static_cast<int>(idx % grid.nu);
        csv << fmt(grid.u_at(i)) << ',' << fmt(grid.v_at(j)) << ',' << fmt(curv[idx])
            << '\n';
    }
}

namespace {

void add_profile_opts(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--n", cfg.profile.n, "ambient sphere dimension");
    cmd->add_option("--k", cfg.profile.k, "cylinder sphere dimension");
    cmd->add_option("--alpha", cfg.profile.alpha, "cylinder radius parameter");
    cmd->add_option("--beta", cfg.profile.beta, "sphere-region threshold");
    cmd->add_option("--gamma", cfg.profile.gamma, "cylinder radius squared");
    cmd->add_option("--eps", cfg.profile.eps, "psi family shaping parameter");
    cmd->add_option("--blend-width", cfg.profile.blend_width, "rho blend window");
}

ProfileSolution solve_or_throw(RunConfig& cfg) {
    cfg.profile.alpha_tilde = cfg.profile.alpha / 2.0;
    cfg.profile.beta_tilde = (1.0 + cfg.profile.beta) / 2.0;
    auto violations = validate_params(cfg.profile);
    if (!violations.empty()) {
        std::string msg = "invalid parameters:";
        for (const auto& v : violations) msg += " [" + v + "]";
        throw std::invalid_argument(msg);
    }
    return assemble_profile(cfg.profile);
}

void write_json(const Json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << j.dump(2) << '\n';
}

int cmd_profile(RunConfig cfg, const std::string& out, int resolution) {
    ProfileSolution sol = solve_or_throw(cfg);
    if (out.empty()) {
        dump_profile_csv(sol, std::cout, resolution);
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot open " + out);
        dump_profile_csv(sol, f, resolution);
    }
    return 0;
}

int cmd_immerse(RunConfig cfg, const std::string& out, int nu, int nv) {
    auto sol = std::make_shared<ProfileSolution>(solve_or_throw(cfg));
    ImmersionMap m(sol);
    export_obj(m, GridSpec::full(nu, nv), out);
    return 0;
}

int cmd_perturb(RunConfig cfg, const std::string& out, double ball_angle,
                double ball_radius) {
    auto sol = std::make_shared<ProfileSolution>(solve_or_throw(cfg));
    ImmersionMap m(sol);
    GeodesicBall ball = GeodesicBall::on_circle(ball_angle, ball_radius);
    ball.validate(cfg.delta0);
    NormalVariation var =
        build_variation(ball, cfg.l0, cfg.alpha0, cfg.profile.beta, +1);
    CalibrationReport rep = calibrate_t(m, var, GridSpec::full(192, 96), cfg.t_init);
    Json j;
    j["config"] = to_json(cfg);
    j["ball"] = {{"center_angle", ball_angle}, {"radius_rad", ball_radius}};
    j["calibration"] = to_json(rep);
    write_json(j, out);
    return 0;
}

int cmd_cantor(RunConfig cfg, const std::string& out, const std::string& mesh, int upto,
               int grid_nu, int grid_nv) {
    auto sol = std::make_shared<ProfileSolution>(solve_or_throw(cfg));
    CantorPlan plan = plan_cantor(2, cfg.cantor_depth, cfg.cantor_ratio, cfg.delta0);
    const int n_balls = static_cast<int>(plan.balls.size());
    if (upto < 0 || upto > n_balls) upto = n_balls;
    StackParams sp;
    sp.l0 = cfg.l0;
    sp.alpha0 = cfg.alpha0;
    sp.t_init = cfg.t_init;
    ComposedStack stack = compose_stack(sol, plan, upto, sp);
    FractalReport rep = verify_fractal_zero_set(stack.map, plan, upto,
                                                GridSpec::full(grid_nu, grid_nv),
                                                cfg.zero_tol);
    if (!mesh.empty()) export_obj(stack.map, GridSpec::full(256, 128), mesh);
    Json j;
    j["config"] = to_json(cfg);
    j["plan"] = to_json(plan);
    Json cals = Json::array();
    for (const auto& c : stack.calibrations) cals.push_back(to_json(c));
    j["calibrations"] = cals;
    j["fractal"] = to_json(rep);
    write_json(j, out);
    return rep.ok ? 0 : 1;
}

int cmd_verify(RunConfig cfg, const std::string& out, const std::string& suite) {
    Json checks = Json::array();
    int failures = 0;
    auto record = [&](const std::string& name, bool ok, const std::string& detail) {
        checks.push_back({{"name", name}, {"ok", ok}, {"detail", detail}});
        if (!ok) ++failures;
    };

    auto sol = std::make_shared<ProfileSolution>(solve_or_throw(cfg));
    const ProfileParams& p = cfg.profile;

    record("root_certificate", std::abs(sol->root_residual) <= 1e-9,
           "G(t0) = " + fmt(sol->root_residual));
    const double mu_b = sol->mu(p.beta - 1e-12);
    record("mu_continuity", std::abs(mu_b - 1.0) <= 1e-8, "mu(beta-) = " + fmt(mu_b));
    const double mu_d = sol->mu.deriv(p.beta - 1e-12, 1);
    record("mu_derivative", std::abs(mu_d) <= 1e-5, "mu'(beta-) = " + fmt(mu_d));

    double worst_res = 0.0;
    for (int i = 0; i <= 500; ++i) {
        const double r = p.alpha + 1e-3 +
                         (p.beta - p.blend_width - p.alpha - 1e-3) * i / 500.0;
        const double res =
            2.0 * r * sol->rho.deriv(r, 1) + sol->rho(r) - sol->psi(r);
        worst_res = std::max(worst_res, std::abs(res));
    }
    record("ode_residual", worst_res <= 1e-7, "max |2r rho'+rho-psi| = " + fmt(worst_res));

    ImmersionMap m(sol);
    const ShapeReport cyl = curvatures_analytic(*sol, p.alpha / 2.0);
    const double want = 1.0 / std::sqrt(p.gamma);
    record("cylinder_spectrum",
           std::abs(cyl.principal_curvatures.back() - want) <= 1e-10 &&
               std::abs(cyl.principal_curvatures.front()) <= 1e-10,
           "spectrum top = " + fmt(cyl.principal_curvatures.back()));
    const ShapeReport sph = curvatures_analytic(*sol, (1.0 + p.beta_tilde) / 2.0);
    record("sphere_spectrum",
           std::abs(sph.principal_curvatures.front() - 1.0) <= 1e-10 &&
               std::abs(sph.principal_curvatures.back() - 1.0) <= 1e-10,
           "spectrum = 1");

    const ZeroSetReport scan = zero_set_scan(m, GridSpec::full(256, 128), cfg.zero_tol);
    bool zone_ok = scan.negative_count == 0;
    const double sa = std::sqrt(p.alpha);
    for (int j = 0; j < scan.grid.nv && zone_ok; ++j)
        for (int i = 0; i < scan.grid.nu; ++i) {
            const double v = scan.grid.v_at(j);
            const std::uint8_t cls =
                scan.classes[static_cast<std::int64_t>(j) * scan.grid.nu + i];
            if ((v * v <= p.alpha && cls != 0) ||
                (std::abs(v) >= std::sqrt(p.alpha + 0.01) && cls != 1)) {
                zone_ok = false;
                break;
            }
        }
    record("zero_set", zone_ok,
           "zero=" + std::to_string(scan.zero_count) +
               " neg=" + std::to_string(scan.negative_count));

    GeodesicBall ball = GeodesicBall::on_circle(0.0, 0.15);
    NormalVariation var = build_variation(ball, cfg.l0, cfg.alpha0, p.beta, +1);
    const double rate0 = det_rate_analytic(*sol, var, 0.0, 0.0);
    record("rate_center", std::abs(rate0 - cfg.l0 / std::sqrt(p.gamma)) <= 1e-4,
           "rate(center) = " + fmt(rate0));
    double worst_rate = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double u = -0.9 * 0.15 + 1.8 * 0.15 * i / 49.0;
        const double v = -0.9 * sa + 1.8 * sa * (i * 37 % 50) / 49.0;
        const double ra = det_rate_analytic(*sol, var, u, v);
        const double rf = det_rate_fd(m, var, u, v);
        worst_rate = std::max(worst_rate, std::abs(ra - rf) / std::max(1.0, std::abs(rf)));
    }
    record("rate_fd_agreement", worst_rate <= 1e-4, "worst rel err = " + fmt(worst_rate));

    if (suite == "all") {
        CalibrationReport cal = calibrate_t(m, var, GridSpec::full(128, 64), cfg.t_init);
        record("single_ball_inflation",
               cal.min_target_h > 0.0 && cal.global_min_h >= -1e-12,
               "t = " + fmt(cal.t) + ", global min H = " + fmt(cal.global_min_h));
    }

    Json j;
    j["config"] = to_json(cfg);
    j["suite"] = suite;
    j["checks"] = checks;
    j["failures"] = failures;
    write_json(j, out);
    return failures == 0 ? 0 : 1;
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"cylinder-capped sphere immersions with fractal zero-curvature sets"};
    app.require_subcommand(1);
    RunConfig cfg;

    std::string out, mesh, suite = "fast";
    int resolution = 512, nu = 64, nv = 32;
    double ball_angle = 0.0, ball_radius = 0.15;
    int upto = -1, grid_nu = 512, grid_nv = 128;

    CLI::App* c_profile = app.add_subcommand("profile", "solve the profile system, dump CSV");
    add_profile_opts(c_profile, cfg);
    c_profile->add_option("--out", out, "output CSV path (default stdout)");
    c_profile->add_option("--resolution", resolution, "sample count");

    CLI::App* c_immerse = app.add_subcommand("immerse", "export base immersion mesh");
    add_profile_opts(c_immerse, cfg);
    c_immerse->add_option("--out", out, "output OBJ path")->required();
    c_immerse->add_option("--nu", nu, "grid resolution in u");
    c_immerse->add_option("--nv", nv, "grid resolution in v");

    CLI::App* c_perturb = app.add_subcommand("perturb", "single-ball inflation pipeline");
    add_profile_opts(c_perturb, cfg);
    c_perturb->add_option("--ball-angle", ball_angle, "ball center angle (rad)");
    c_perturb->add_option("--ball-radius", ball_radius, "ball radius (rad)");
    c_perturb->add_option("--l0", cfg.l0, "variation amplitude");
    c_perturb->add_option("--alpha0", cfg.alpha0, "sigma plateau bound");
    c_perturb->add_option("--delta0", cfg.delta0, "max ball radius");
    c_perturb->add_option("--out", out, "report JSON path (default stdout)");

    CLI::App* c_cantor = app.add_subcommand("cantor", "plan + compose + verify fractal stack");
    add_profile_opts(c_cantor, cfg);
    c_cantor->add_option("--depth", cfg.cantor_depth, "Cantor construction depth");
    c_cantor->add_option("--ratio", cfg.cantor_ratio, "middle fraction removed");
    c_cantor->add_option("--delta0", cfg.delta0, "max ball radius");
    c_cantor->add_option("--upto", upto, "number of balls to apply (-1 = all)");
    c_cantor->add_option("--grid-nu", grid_nu, "verification grid u resolution");
    c_cantor->add_option("--grid-nv", grid_nv, "verification grid v resolution");
    c_cantor->add_option("--out", out, "report JSON path (default stdout)");
    c_cantor->add_option("--mesh", mesh, "optional OBJ path of the composed map");

    CLI::App* c_verify = app.add_subcommand("verify", "run the invariant suite");
    add_profile_opts(c_verify, cfg);
    c_verify->add_option("--suite", suite, "fast | all")
        ->check(CLI::IsMember({"fast", "all"}));
    c_verify->add_option("--out", out, "report JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_profile->parsed()) return cmd_profile(cfg, out, resolution);
        if (c_immerse->parsed()) return cmd_immerse(cfg, out, nu, nv);
        if (c_perturb->parsed()) return cmd_perturb(cfg, out, ball_angle, ball_radius);
        if (c_cantor->parsed()) return cmd_cantor(cfg, out, mesh, upto, grid_nu, grid_nv);
        if (c_verify->parsed()) return cmd_verify(cfg, out, suite);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace kforge
