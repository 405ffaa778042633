#ifndef KFORGE_GEOMIO_HPP
#define KFORGE_GEOMIO_HPP

#include <string>

#include <json.hpp>

#include "kforge/cantor.hpp"
#include "kforge/immersion.hpp"
#include "kforge/perturbation.hpp"

namespace kforge {

using Json = nlohmann::ordered_json;

/// Everything a run needs; embedded verbatim in every report for
/// reproducibility.
struct RunConfig {
    ProfileParams profile = ProfileParams::defaults();
    int cantor_depth = 3;
    double cantor_ratio = 1.0 / 3.0;
    double delta0 = 2.2;
    double l0 = 1.0;
    double alpha0 = 0.25;
    double t_init = 0.1;
    double zero_tol = 1e-10;
};

Json to_json(const ProfileParams& p);
Json to_json(const RunConfig& c);
Json to_json(const GridSpec& g);
Json to_json(const ZeroSetReport& r);        // counts + bounds, not the class grid
Json to_json(const CalibrationReport& r);
Json to_json(const CantorPlan& plan);
Json to_json(const FractalReport& r);

/// ASCII OBJ of the chart grid (u-wrapped quads, 1-based indices) plus a
/// sibling CSV `<path>.curvature.csv` with one H value per vertex.
void export_obj(const ImmersionMap& m, const GridSpec& grid, const std::string& path);

/// Subcommands: profile | immerse | perturb | cantor | verify.
/// Exit codes: 0 success, 1 invariant violation, 2 invalid parameters/usage.
int run_cli(int argc, char** argv);

} // namespace kforge

#endif
