// Command-line front end. Exit codes: 0 verified or vacuous, 1 input or
// runtime error, 2 inconclusive PD, 3 a hypothesis fails, 4 implication violated.

#include "bp/error.hpp"
#include "bp/kernels.hpp"
#include "bp/oracles.hpp"
#include "bp/scenario_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace bp;

void write_text(const std::string& path, const std::string& content)
{
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::validation, "cannot write " + path);
    out << content;
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::validation, "cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Accepts inline JSON or a path to a JSON file.
Json json_argument(const std::string& arg)
{
    const std::string text = std::filesystem::exists(arg) ? read_text(arg) : arg;
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::validation, std::string("cannot parse body JSON: ") + e.what());
    }
}

int report_and_exit(const VerificationReport& report, const std::string& out)
{
    const std::string text = dump_json(report_to_json(report));
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text(out, text);
        std::cout << report.scenario.name << ": " << report.verdict << " (exit " << report.exit_code << ")\n";
    }
    return report.exit_code;
}

Region region_from_string(const std::string& name)
{
    if (name == "K_minus_L") return Region::K_minus_L;
    if (name == "L_minus_K") return Region::L_minus_K;
    throw Error(ErrorKind::validation, "region must be K_minus_L or L_minus_K");
}

const Density& density_by_name(const Scenario& s, const std::string& name)
{
    if (name == "f_section") return s.f_section;
    if (name == "f_volume") return s.f_volume;
    if (name == "g_section") return s.g_section;
    if (name == "g_volume") return s.g_volume;
    throw Error(ErrorKind::validation, "density must be one of f_section, f_volume, g_section, g_volume");
}

void apply_thread_cap()
{
    const char* env = std::getenv("BP_THREADS");
    if (!env || !*env) return;
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (*end != '\0' || value < 1) throw Error(ErrorKind::validation, "BP_THREADS must be a positive integer");
    if (value < worker_count()) set_worker_count(static_cast<int>(value));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Busemann-Petty type comparison checker"};
    app.require_subcommand(1);

    std::string scenario_path, out_path;
    auto* check = app.add_subcommand("check", "Run a scenario and write the report JSON");
    check->add_option("file", scenario_path, "Scenario JSON")->required();
    check->add_option("--out", out_path, "Report path (stdout if omitted)");

    std::string body_spec;
    int pd_dim = 3, pd_degree = 8, pd_resolution = 0, pd_eval = 0;
    double pd_tol = 1e-7, pd_tail = 1e-2;
    auto* pd = app.add_subcommand("pd-test", "Positive-definiteness test of a body's radial function");
    pd->add_option("body", body_spec, "Body JSON, inline or as a file")->required();
    pd->add_option("--dim", pd_dim, "Dimension n")->check(CLI::Range(3, 64));
    pd->add_option("--degree", pd_degree, "Truncation degree (even)");
    pd->add_option("--resolution", pd_resolution, "Projection rule resolution (0 = dimension default)");
    pd->add_option("--eval-resolution", pd_eval, "Evaluation rule resolution (0 = degree + 1)");
    pd->add_option("--tol", pd_tol, "Relative tolerance");
    pd->add_option("--tail-threshold", pd_tail, "Tail energy threshold");

    int xi_resolution = 0;
    auto* profile = app.add_subcommand("section-profile", "Per-direction section margins as CSV");
    profile->add_option("file", scenario_path, "Scenario JSON")->required();
    profile->add_option("--out", out_path, "CSV path (stdout if omitted)");
    profile->add_option("--xi-resolution", xi_resolution, "Resolution of the direction grid");

    std::string example_id;
    std::optional<double> example_eps;
    auto* example = app.add_subcommand("example", "Run a built-in scenario");
    example->add_option("id", example_id, "example-3.1, example-3.2, example-3.3 or zvavitch-lebesgue")->required();
    example->add_option("--eps", example_eps, "ε of example 3.3");
    example->add_option("--out", out_path, "Report path (stdout if omitted)");
    bool dump_scenario = false;
    example->add_flag("--scenario", dump_scenario, "Print the scenario JSON instead of running it");

    auto* oracle = app.add_subcommand("oracle", "Brute-force reference computations");
    oracle->require_subcommand(1);
    std::string region_name = "K_minus_L", density_name = "f_volume";
    std::uint64_t samples = 1000000, seed = 1;
    std::vector<double> xi;
    auto* o_region = oracle->add_subcommand("region", "Monte Carlo region measure against quadrature");
    o_region->add_option("file", scenario_path, "Scenario JSON")->required();
    o_region->add_option("--region", region_name, "K_minus_L or L_minus_K");
    o_region->add_option("--density", density_name, "f_section, f_volume, g_section or g_volume");
    o_region->add_option("--samples", samples);
    o_region->add_option("--seed", seed);
    auto* o_section = oracle->add_subcommand("section", "Monte Carlo section measure against quadrature");
    o_section->add_option("file", scenario_path, "Scenario JSON")->required();
    o_section->add_option("--xi", xi, "Direction ξ")->required()->delimiter(',');
    o_section->add_option("--region", region_name, "K_minus_L or L_minus_K");
    o_section->add_option("--density", density_name, "f_section, f_volume, g_section or g_volume");
    o_section->add_option("--samples", samples);
    o_section->add_option("--seed", seed);
    double sigma = 1.0;
    auto* o_ft = oracle->add_subcommand("ft", "Gaussian test-function oracle against pd-test");
    o_ft->add_option("body", body_spec, "Body JSON, inline or as a file")->required();
    o_ft->add_option("--dim", pd_dim)->check(CLI::Range(3, 64));
    o_ft->add_option("--degree", pd_degree);
    o_ft->add_option("--resolution", pd_resolution);
    o_ft->add_option("--sigma", sigma, "Test function scale in [0.1, 10]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        apply_thread_cap();

        if (*check) return report_and_exit(run_scenario(load_scenario(scenario_path)), out_path);

        if (*example) {
            const Scenario s = builtin_scenario(example_id, example_eps);
            if (dump_scenario) {
                write_text(out_path, dump_json(scenario_to_json(s)));
                return 0;
            }
            return report_and_exit(run_scenario(s), out_path);
        }

        if (*profile) {
            Scenario s = load_scenario(scenario_path);
            if (xi_resolution > 0) s.quadrature.xi_resolution = xi_resolution;
            validate(s);
            write_text(out_path, section_profile_csv(verify_hypothesis(s), s.dim));
            return 0;
        }

        if (*pd || *o_ft) {
            const StarBody body = body_from_json(json_argument(body_spec), pd_dim);
            const int res = pd_resolution > 0 ? pd_resolution : std::max(default_quadrature(pd_dim).resolution, pd_degree + 1);
            const SphericalQuadrature quad = build_sphere_quadrature(pd_dim, res);
            const SphereFunction g = [&body](ConstSpan v) { return body.radial(v); };
            PDOptions opts;
            opts.tol = pd_tol;
            opts.tail_threshold = pd_tail;
            opts.eval_resolution = pd_eval;
            const PDReport r = pd_test(g, pd_degree, quad, opts);
            if (*pd) {
                std::printf("verdict: %s\nstatistic: %s\nmin_value: %.17g\ndecision_band: %.17g\ntail_energy: %.17g\n",
                            to_string(r.verdict).c_str(), to_string(r.statistic).c_str(), r.min_value,
                            r.decision_band, r.tail_energy);
                switch (r.verdict) {
                case PDVerdict::positive_definite: return 0;
                case PDVerdict::inconclusive: return 2;
                case PDVerdict::not_positive_definite: return 3;
                }
            }
            const SphereFunction oracle_fn = distributional_ft_oracle(g, sigma, quad, pd_degree);
            Json rows = Json::array();
            const SphericalQuadrature& eval = *r.evaluation;
            double diff = 0.0, ref = 0.0;
            for (std::size_t i = 0; i < eval.size(); ++i) {
                const ConstSpan v = eval.node(i);
                const double o = oracle_fn(v);
                const double t = r.transformed_density[i];
                diff += eval.weight(i) * (o - t) * (o - t);
                ref += eval.weight(i) * o * o;
                if (i < 8) rows.push_back(Json{{"direction", Vec(v.begin(), v.end())}, {"oracle", o}, {"pd_test", t}});
            }
            const Json doc{{"sigma", sigma},
                           {"dim", pd_dim},
                           {"degree", pd_degree},
                           {"relative_l2_difference", std::sqrt(diff / ref)},
                           {"samples", rows}};
            std::cout << dump_json(doc);
            return 0;
        }

        if (*o_region || *o_section) {
            const Scenario s = load_scenario(scenario_path);
            const Region region = region_from_string(region_name);
            const Density& density = density_by_name(s, density_name);
            const RadialRule radial(s.quadrature.radial_order);
            MCEstimate mc;
            double quadrature_value = 0.0;
            if (*o_region) {
                mc = mc_region_measure(region, density, s.K, s.L, samples, seed);
                const SphericalQuadrature quad =
                    build_sphere_quadrature(s.dim, s.quadrature.resolution, s.quadrature.scheme, s.quadrature.seed);
                quadrature_value = region_measure(region, density, s.K, s.L, quad, radial);
            } else {
                const Direction dir = Direction::from_vector(xi);
                if (dir.dim() != s.dim) throw Error(ErrorKind::dimension_mismatch, "--xi has the wrong dimension");
                mc = mc_section_measure(region, density, dir, s.K, s.L, samples, seed);
                const SubsphereQuadrature sub = build_subsphere_quadrature(dir.coords(), s.quadrature.section_resolution);
                quadrature_value = section_measure(region, density, s.K, s.L, sub, radial);
            }
            const Json doc{{"region", region_name},
                           {"density", density_name},
                           {"mc_value", mc.value},
                           {"mc_std_error", mc.std_error},
                           {"samples", mc.samples},
                           {"seed", mc.seed},
                           {"quadrature_value", quadrature_value},
                           {"sigmas_apart", mc.std_error > 0 ? std::abs(mc.value - quadrature_value) / mc.std_error : 0.0}};
            std::cout << dump_json(doc);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
