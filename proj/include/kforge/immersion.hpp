#ifndef KFORGE_IMMERSION_HPP
#define KFORGE_IMMERSION_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kforge/grid.hpp"
#include "kforge/profile.hpp"
#include "kforge/variation.hpp"

namespace kforge {

/// Point of S^n split into the x-block (R^{k+1}) and the y-block (R^{n-k}).
struct SpherePoint {
    Eigen::VectorXd x;
    Eigen::VectorXd y;

    double r() const { return y.squaredNorm(); }
    void validate() const;
};

/// Pointwise differential geometry of the immersion at one point.
struct ShapeReport {
    Eigen::VectorXd point_image;
    Eigen::VectorXd normal;
    std::vector<double> principal_curvatures;  // ascending
    double gauss_kronecker = 0.0;
    double a_norm = 0.0;
    std::string method;  // "analytic" | "finite-difference"
};

/// phi(x, y) = (theta(||y||^2) x, y).
Eigen::VectorXd evaluate(const ProfileSolution& sol, const SpherePoint& p);

/// N(z, w) = (1/c2)(z, c1 w) at (z, w) = evaluate(sol, p).
Eigen::VectorXd gauss_map(const ProfileSolution& sol, const SpherePoint& p);

/// Closed-form spectrum {1/c2 (xk), c1/c2 (x(n-k-1)), psi_eff (x1)} at radius
/// r, any dimension.
ShapeReport curvatures_analytic(const ProfileSolution& sol, double r);

struct AppliedVariation {
    NormalVariation var;
    double t = 0.0;
};

/// The n=2 surface as a map from the (u, v) chart,
/// x = sqrt(1-v^2)(cos u, sin u), y = v, with an optional stack of normal
/// variations (pairwise disjoint supports). Immutable; shareable across
/// threads.
class ImmersionMap {
public:
    explicit ImmersionMap(std::shared_ptr<const ProfileSolution> sol);

    const ProfileSolution& profile() const { return *sol_; }
    std::shared_ptr<const ProfileSolution> profile_ptr() const { return sol_; }
    const std::vector<AppliedVariation>& stack() const { return stack_; }

    Eigen::Vector3d operator()(double u, double v) const;
    /// Exact (u, v) 2-jets of the three components.
    std::array<Jet2D, 3> jets(double u, double v) const;
    /// Analytic unit normal of the *base* map at the chart point (used for
    /// the variation direction and for orienting numerical normals).
    Eigen::Vector3d base_normal(double u, double v) const;

    /// Throws on support collision with the existing stack.
    ImmersionMap with_variation(const NormalVariation& var, double t) const;

private:
    std::shared_ptr<const ProfileSolution> sol_;
    std::vector<AppliedVariation> stack_;
};

/// Exact curvature of the (possibly perturbed) chart map via the 2-jets:
/// S = -I^{-1} <dd Phi, N>, so the unit sphere has curvature +1.
ShapeReport chart_shape_analytic(const ImmersionMap& m, double u, double v);

/// Just the Gauss-Kronecker value of chart_shape_analytic (cheap scan kernel).
double chart_curvature(const ImmersionMap& m, double u, double v);

/// Independent finite-difference oracle (5-point stencils, step h), normal
/// oriented to agree with the analytic base normal.
ShapeReport shape_operator_fd(const ImmersionMap& m, double u, double v,
                              double h = 1e-4);

/// Minimum numerical rank of the FD shape operator over a deterministic
/// sample set (singular values > 1e-7).
int rank_estimate(const ImmersionMap& m, int samples);

struct ZeroSetReport {
    GridSpec grid;
    double tol = 0.0;
    std::int64_t zero_count = 0, positive_count = 0, negative_count = 0;
    std::vector<std::array<double, 3>> negative_points;  // (u, v, H)
    double zero_v_min = 0.0, zero_v_max = 0.0;           // bounding band of zeros
    std::vector<std::uint8_t> classes;  // row-major [j*nu+i]: 0 zero, 1 pos, 2 neg
};

/// Classify H at every grid point (analytic chart curvature).
ZeroSetReport zero_set_scan(const ImmersionMap& m, const GridSpec& grid, double tol);
/// Reference loop, bitwise-identical results.
ZeroSetReport zero_set_scan_serial(const ImmersionMap& m, const GridSpec& grid,
                                   double tol);

} // namespace kforge

#endif
