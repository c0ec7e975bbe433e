#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ncheat/config.hpp"
#include "ncheat/kernel.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitKernelRange = 4;

void usage(std::ostream& out) {
    out << "usage:\n"
           "  ncheat run <config>\n"
           "  ncheat preset <name> [--out <path>]        names: thm11 thm12 closedloop kernelcheck\n"
           "  ncheat sweep <config> --grid <spec> [--out <path>]\n"
           "  ncheat kernel-check --lambda <v> --l <v>\n";
}

std::string flag_value(std::vector<std::string>& args, const std::string& name) {
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == name) {
            std::string v = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            return v;
        }
    }
    return "";
}

int cmd_run(const std::vector<std::string>& args) {
    if (args.size() != 1) {
        usage(std::cerr);
        return kExitConfig;
    }
    const ncheat::RunConfig cfg = ncheat::parse_config_file(args[0]);
    if (cfg.controller_enabled && cfg.curve.kind == ncheat::CurveKind::PowerLaw
        && cfg.kernel.lambda <= 25.0 * cfg.curve.k * cfg.curve.k)
        std::cerr << "warning: lambda <= 25 k^2, below the full-regularity threshold\n";
    if (!cfg.curve.monotone())
        std::cerr << "warning: non-monotone boundary curve (domain shrinks over part of each period)\n";
    ncheat::run_scenario(cfg);
    std::cout << "wrote " << cfg.trace_path << " and " << cfg.summary_path << "\n";
    return kExitOk;
}

int cmd_preset(std::vector<std::string> args) {
    const std::string out_path = flag_value(args, "--out");
    if (args.size() != 1) {
        usage(std::cerr);
        return kExitConfig;
    }
    const std::string text = ncheat::serialize_config(ncheat::preset(args[0]));
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kExitConfig;
        }
        out << text;
        std::cout << "wrote " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_sweep(std::vector<std::string> args) {
    const std::string grid_spec = flag_value(args, "--grid");
    std::string out_path = flag_value(args, "--out");
    if (out_path.empty())
        out_path = "sweep.csv";
    if (args.size() != 1 || grid_spec.empty()) {
        usage(std::cerr);
        return kExitConfig;
    }
    const ncheat::RunConfig base = ncheat::parse_config_file(args[0]);
    ncheat::sweep(base, ncheat::parse_grid_spec(grid_spec), out_path);
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_kernel_check(std::vector<std::string> args) {
    const std::string lam_s = flag_value(args, "--lambda");
    const std::string l_s = flag_value(args, "--l");
    if (!args.empty() || lam_s.empty() || l_s.empty()) {
        usage(std::cerr);
        return kExitConfig;
    }
    ncheat::KernelParams params;
    params.lambda = std::stod(lam_s);
    const double l = std::stod(l_s);
    const ncheat::KernelBoundCheck chk = ncheat::kernel_bound_check(params, l);
    const ncheat::KernelResidual r64 = ncheat::kernel_pde_residual(params, 64);
    const ncheat::KernelResidual r128 = ncheat::kernel_pde_residual(params, 128);
    std::printf("max|p| over triangle: %.6e   bound sqrt(lambda)e^(sqrt(lambda)l): %.6e   %s\n",
                chk.empirical_max, chk.bound, chk.empirical_max <= chk.bound ? "OK" : "VIOLATED");
    std::printf("pde residual p: %.3e (h=1/64) -> %.3e (h=1/128), ratio %.2f\n", r64.p_residual,
                r128.p_residual, r64.p_residual / r128.p_residual);
    std::printf("pde residual q: %.3e (h=1/64) -> %.3e (h=1/128), ratio %.2f\n", r64.q_residual,
                r128.q_residual, r64.q_residual / r128.q_residual);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(std::cerr);
        return kExitConfig;
    }
    const std::string cmd = argv[1];
    std::vector<std::string> args(argv + 2, argv + argc);
    try {
        if (cmd == "run")
            return cmd_run(args);
        if (cmd == "preset")
            return cmd_preset(std::move(args));
        if (cmd == "sweep")
            return cmd_sweep(std::move(args));
        if (cmd == "kernel-check")
            return cmd_kernel_check(std::move(args));
        usage(std::cerr);
        return kExitConfig;
    } catch (const ncheat::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ncheat::divergence_error& e) {
        std::cerr << "numerical divergence: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const ncheat::kernel_range_error& e) {
        std::cerr << "kernel range error: " << e.what() << "\n";
        return kExitKernelRange;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
