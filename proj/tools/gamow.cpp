#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gamow/checks.hpp"
#include "gamow/energy.hpp"
#include "gamow/io.hpp"
#include "gamow/kernel.hpp"
#include "gamow/minimize.hpp"
#include "gamow/parallel.hpp"
#include "gamow/shape.hpp"

using namespace gamow;

namespace {

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string piece;
    while (std::getline(ss, piece, sep)) {
        std::string t = trim_ws(piece);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::string path = dir + "/" + name;
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write output file: " + path);
    return f;
}

int run_verify(const RunConfig& rc) {
    rc.restrict_keys({"kernels", "dims", "grid", "grid_n2", "grid_n3", "degree", "shapes",
                      "amplitude", "seed", "eps_final", "genest_ceiling", "cross_ceiling",
                      "layer_ceiling", "maximality_slack", "out"});
    VerifyConfig vc = default_verify_config();
    if (rc.has("kernels")) {
        vc.kernels.clear();
        for (const std::string& spec : split_list(rc.raw("kernels"), ';'))
            vc.kernels.push_back(parse_kernel(spec));
    }
    if (rc.has("dims")) {
        vc.dims.clear();
        for (const std::string& d : split_list(rc.raw("dims"), ',')) {
            if (d != "2" && d != "3") throw ConfigError("dims must list 2 and/or 3");
            vc.dims.push_back(d == "2" ? 2 : 3);
        }
    }
    if (rc.has("grid")) vc.grid_n2 = vc.grid_n3 = static_cast<int>(rc.integer("grid", 0));
    vc.grid_n2 = static_cast<int>(rc.integer("grid_n2", vc.grid_n2));
    vc.grid_n3 = static_cast<int>(rc.integer("grid_n3", vc.grid_n3));
    vc.degree = static_cast<int>(rc.integer("degree", vc.degree));
    vc.shapes = static_cast<int>(rc.integer("shapes", vc.shapes));
    vc.amplitude = rc.num("amplitude", vc.amplitude);
    vc.seed = rc.integer("seed", vc.seed);
    vc.eps_final = rc.num("eps_final", vc.eps_final);
    vc.genest_ceiling = rc.num("genest_ceiling", vc.genest_ceiling);
    vc.cross_ceiling = rc.num("cross_ceiling", vc.cross_ceiling);
    vc.layer_ceiling = rc.num("layer_ceiling", vc.layer_ceiling);
    vc.maximality_slack = rc.num("maximality_slack", vc.maximality_slack);
    if (vc.degree < 1 || vc.shapes < 0 || vc.amplitude <= 0.0 || vc.amplitude > 0.4)
        throw ConfigError("verify config out of range");
    const std::string out = rc.str("out", ".");

    ConfigEcho echo;
    {
        std::string ks;
        for (std::size_t i = 0; i < vc.kernels.size(); ++i)
            ks += (i ? ";" : "") + kernel_spec_string(vc.kernels[i]);
        std::string ds;
        for (std::size_t i = 0; i < vc.dims.size(); ++i)
            ds += (i ? "," : "") + std::to_string(vc.dims[i]);
        echo = {{"command", "verify"},
                {"kernels", ks},
                {"dims", ds},
                {"grid_n2", std::to_string(vc.grid_n2)},
                {"grid_n3", std::to_string(vc.grid_n3)},
                {"degree", std::to_string(vc.degree)},
                {"shapes", std::to_string(vc.shapes)},
                {"amplitude", format_number(vc.amplitude)},
                {"seed", std::to_string(vc.seed)},
                {"eps_final", format_number(vc.eps_final)},
                {"genest_ceiling", format_number(vc.genest_ceiling)},
                {"cross_ceiling", format_number(vc.cross_ceiling)},
                {"layer_ceiling", format_number(vc.layer_ceiling)},
                {"maximality_slack", format_number(vc.maximality_slack)},
                {"out", out}};
    }

    std::vector<CheckReport> reports = run_all_checks(vc);
    std::ofstream f = open_out(out, "verify_report.txt");
    write_header(f, "verify", echo);
    write_check_reports(f, reports);
    f.close();
    CheckSummary s = summarize_checks(reports);
    std::cout << "checks: total=" << s.total << " failed=" << s.failed << " errors=" << s.errors
              << " degenerate=" << s.degenerate << "\n";
    std::cout << "report: " << out << "/verify_report.txt\n";
    return check_exit_code(s);
}

int run_energy(const RunConfig& rc, const std::string& shape_path) {
    rc.restrict_keys({"kernel", "eps"});
    RadialKernel k = parse_kernel(rc.str("kernel", "riesz:alpha=2"));
    const double eps = rc.num("eps", 1.0);
    ShapeFileData sf = read_shape_file_path(shape_path);
    ShapeSpace space = make_space(sf.N, sf.m, sf.L);
    RadialGraph g = make_graph(space, sf.coeffs);
    ConfigEcho echo = {{"command", "energy"},
                       {"kernel", kernel_spec_string(k)},
                       {"eps", format_number(eps)},
                       {"shape", shape_path}};
    EnergyReport r = gamow_energy(k, eps, g);
    write_header(std::cout, "energy", echo);
    write_energy_report(std::cout, r);
    return 0;
}

struct MinimizeSetup {
    RadialKernel kernel;
    int dim = 2;
    int grid = 0;
    double eps = 1e-3;
    OptimizerConfig oc;
    std::string out;
};

MinimizeSetup minimize_setup(const RunConfig& rc) {
    MinimizeSetup s;
    s.kernel = parse_kernel(rc.str("kernel", "riesz:alpha=2"));
    s.dim = static_cast<int>(rc.integer("dim", 2));
    if (s.dim != 2 && s.dim != 3) throw ConfigError("dim must be 2 or 3");
    s.grid = static_cast<int>(rc.integer("grid", s.dim == 2 ? 64 : 12));
    s.eps = rc.num("eps", 1e-3);
    s.oc.L = static_cast<int>(rc.integer("L", s.oc.L));
    s.oc.step0 = rc.num("step0", s.oc.step0);
    s.oc.shrink = rc.num("shrink", s.oc.shrink);
    s.oc.max_iters = static_cast<int>(rc.integer("max_iters", s.oc.max_iters));
    s.oc.grad_tol = rc.num("grad_tol", s.oc.grad_tol);
    s.oc.deviation_tol = rc.num("deviation_tol", s.oc.deviation_tol);
    s.oc.restarts = static_cast<int>(rc.integer("restarts", s.oc.restarts));
    s.oc.fd_step = rc.num("fd_step", s.oc.fd_step);
    s.oc.seed = rc.integer("seed", s.oc.seed);
    s.oc.validate();
    s.out = rc.str("out", ".");
    return s;
}

ConfigEcho minimize_echo(const MinimizeSetup& s, const char* command) {
    return {{"command", command},
            {"kernel", kernel_spec_string(s.kernel)},
            {"dim", std::to_string(s.dim)},
            {"grid", std::to_string(s.grid)},
            {"L", std::to_string(s.oc.L)},
            {"eps", format_number(s.eps)},
            {"step0", format_number(s.oc.step0)},
            {"shrink", format_number(s.oc.shrink)},
            {"max_iters", std::to_string(s.oc.max_iters)},
            {"grad_tol", format_number(s.oc.grad_tol)},
            {"deviation_tol", format_number(s.oc.deviation_tol)},
            {"restarts", std::to_string(s.oc.restarts)},
            {"fd_step", format_number(s.oc.fd_step)},
            {"seed", std::to_string(s.oc.seed)},
            {"out", s.out}};
}

int run_minimize(const RunConfig& rc) {
    rc.restrict_keys({"kernel", "dim", "grid", "L", "eps", "step0", "shrink", "max_iters",
                      "grad_tol", "deviation_tol", "restarts", "fd_step", "seed", "out"});
    MinimizeSetup s = minimize_setup(rc);
    ShapeSpace space = make_space(s.dim, s.grid, s.oc.L);
    MinimizeResult res = minimize(s.kernel, s.eps, s.oc, space);
    ConfigEcho echo = minimize_echo(s, "minimize");
    {
        std::ofstream f = open_out(s.out, "minimize_shape.txt");
        write_shape_file(f, res.shape, echo);
    }
    {
        std::ofstream f = open_out(s.out, "minimize_trace.csv");
        write_trace_csv(f, res.trace, echo);
    }
    write_header(std::cout, "minimize", echo);
    write_energy_report(std::cout, res.report);
    std::cout << "deviation = " << format_number(res.deviation) << "\n";
    std::cout << "energy_gap = "
              << format_number(res.start_energies[res.best_start] - res.ball_objective) << "\n";
    std::cout << "best_start = " << res.best_start << "\n";
    std::cout << "converged = " << (res.converged ? 1 : 0) << "\n";
    return res.converged ? 0 : 5;
}

int run_sweep(const RunConfig& rc, bool plot_flag) {
    rc.restrict_keys({"kernel", "dim", "grid", "L", "eps_list", "step0", "shrink", "max_iters",
                      "grad_tol", "deviation_tol", "restarts", "fd_step", "seed", "out",
                      "plot_data"});
    MinimizeSetup s = minimize_setup(rc);
    std::vector<double> eps_list = rc.has("eps_list")
                                       ? rc.num_list("eps_list")
                                       : std::vector<double>{1, 0.3, 0.1, 0.03, 0.01, 0.003};
    bool plot = plot_flag || rc.integer("plot_data", 0) != 0;
    ShapeSpace space = make_space(s.dim, s.grid, s.oc.L);
    SweepResult sw = sweep_epsilon(s.kernel, s.oc, eps_list, space);
    ConfigEcho echo = minimize_echo(s, "sweep");
    {
        std::string el;
        for (std::size_t i = 0; i < eps_list.size(); ++i)
            el += (i ? "," : "") + format_number(eps_list[i]);
        echo.insert(echo.begin() + 6, {"eps_list", el});
        for (auto it = echo.begin(); it != echo.end(); ++it)
            if (it->first == "eps") {
                echo.erase(it);
                break;
            }
    }
    {
        std::ofstream f = open_out(s.out, "sweep.csv");
        write_sweep_csv(f, sw, echo);
    }
    {
        RadialGraph final_shape = make_graph(space, sw.final_coeffs);
        std::ofstream f = open_out(s.out, "sweep_shape.txt");
        write_shape_file(f, final_shape, echo);
    }
    if (plot) {
        std::ofstream f = open_out(s.out, "deviation_vs_eps.dat");
        write_plot_data(f, sw, echo);
    }
    write_header(std::cout, "sweep", echo);
    std::cout << "epsilon,deviation,energy_gap,iters,converged\n";
    for (const SweepRow& row : sw.rows)
        std::cout << format_number(row.eps) << "," << format_number(row.deviation) << ","
                  << format_number(row.energy_gap) << "," << row.iters << ","
                  << (row.converged ? 1 : 0) << "\n";
    std::cout << "eps_hat = " << (sw.has_eps_hat ? format_number(sw.eps_hat) : std::string("none"))
              << "\n";
    return sw.any_nonconverged ? 5 : 0;
}

int run_kernels(const std::string& spec, int dim) {
    std::cout << "kernel spec grammar:\n";
    std::cout << "  riesz:alpha=A        g(t) = t^(A-N), 0 < A <= N\n";
    std::cout << "  exp:mu=M             g(t) = exp(-M t), M > 0\n";
    std::cout << "  const:c=C            g(t) = C, C > 0\n";
    std::cout << "  truncpow:alpha=A,cutoff=B   g(t) = max(t,B)^(A-N), 0 < A <= N, B > 0\n";
    if (!spec.empty()) {
        RadialKernel k = parse_kernel(spec);
        RadialKernel ks = scaled_kernel(k, dim);
        std::cout << "kernel = " << kernel_spec_string(k) << "\n";
        std::cout << "dim = " << dim << "\n";
        std::cout << "admissibility_integral = " << format_number(admissibility_integral(k, dim))
                  << "\n";
        std::cout << "scaled_kernel = " << kernel_spec_string(ks) << "\n";
        std::cout << "scaled_admissibility_integral = "
                  << format_number(admissibility_integral(ks, dim)) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gamow functional toolkit: perimeter plus nonlocal kernel energies on "
                 "star-shaped sets"};
    app.require_subcommand(1);

    struct Common {
        std::string config, kernel, out;
        int dim = 0, grid = 0, threads = 0;
        long seed = 0;
        double eps = 0.0;
        std::string eps_list;
    };

    auto add_common = [](CLI::App* cmd, Common& c, bool with_eps, bool with_eps_list) {
        cmd->add_option("--config", c.config, "config file (key = value lines)");
        cmd->add_option("--kernel", c.kernel, "kernel spec, e.g. riesz:alpha=2");
        cmd->add_option("--dim", c.dim, "ambient dimension (2 or 3)");
        cmd->add_option("--grid", c.grid, "grid resolution m");
        cmd->add_option("--seed", c.seed, "random seed");
        cmd->add_option("--out", c.out, "output directory");
        cmd->add_option("--threads", c.threads, "worker thread cap");
        if (with_eps) cmd->add_option("--eps", c.eps, "epsilon");
        if (with_eps_list) cmd->add_option("--eps-list", c.eps_list, "comma-separated epsilons");
    };

    Common cv, ce, cm, cs;
    bool plot_flag = false;
    std::string energy_shape, kernels_spec;
    int kernels_dim = 3;

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the estimate check battery");
    add_common(verify_cmd, cv, false, false);

    CLI::App* energy_cmd = app.add_subcommand("energy", "evaluate F_eps for a shape file");
    energy_cmd->add_option("shape", energy_shape, "shape file path")->required();
    add_common(energy_cmd, ce, true, false);

    CLI::App* minimize_cmd = app.add_subcommand("minimize", "minimize F_eps at fixed volume");
    add_common(minimize_cmd, cm, true, false);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "minimize across a descending eps list");
    add_common(sweep_cmd, cs, false, true);
    sweep_cmd->add_flag("--plot-data", plot_flag, "emit deviation-vs-eps series");

    CLI::App* kernels_cmd = app.add_subcommand("kernels", "describe kernel specs");
    kernels_cmd->add_option("--kernel", kernels_spec, "kernel spec to inspect");
    kernels_cmd->add_option("--dim", kernels_dim, "dimension for admissibility");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        auto build_rc = [](CLI::App* cmd, const Common& c, bool kernel_plural) {
            RunConfig rc;
            if (!c.config.empty()) rc = read_config_file(c.config);
            auto given = [cmd](const char* name) {
                const CLI::Option* o = cmd->get_option_no_throw(name);
                return o != nullptr && o->count() > 0;
            };
            if (given("--kernel")) rc.set(kernel_plural ? "kernels" : "kernel", c.kernel);
            if (given("--dim")) rc.set(kernel_plural ? "dims" : "dim", std::to_string(c.dim));
            if (given("--grid")) rc.set("grid", std::to_string(c.grid));
            if (given("--seed")) rc.set("seed", std::to_string(c.seed));
            if (given("--out")) rc.set("out", c.out);
            if (given("--eps")) rc.set("eps", format_number(c.eps));
            if (given("--eps-list")) rc.set("eps_list", c.eps_list);
            if (given("--threads") && c.threads > 0) set_thread_count(c.threads);
            return rc;
        };
        if (verify_cmd->parsed()) return run_verify(build_rc(verify_cmd, cv, true));
        if (energy_cmd->parsed()) return run_energy(build_rc(energy_cmd, ce, false), energy_shape);
        if (minimize_cmd->parsed()) return run_minimize(build_rc(minimize_cmd, cm, false));
        if (sweep_cmd->parsed()) return run_sweep(build_rc(sweep_cmd, cs, false), plot_flag);
        if (kernels_cmd->parsed()) return run_kernels(kernels_spec, kernels_dim);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
