#ifndef BLX_PROBES_HPP
#define BLX_PROBES_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "blx/discrete_operator.hpp"
#include "blx/grid.hpp"

// Top-level experiments: each boundedness statement becomes a ratio sweep
// over a seeded random function family and a truncation sweep, classified by
// fixed, recorded thresholds. Boundedness cannot be certified numerically;
// the operational definitions are: bounded-stable = at most 10% relative
// ratio drift between consecutive truncations, growth-witness = strictly
// increasing ratios whose designated growth regression reaches r^2 >= 0.9.

namespace blx {

enum class Verdict { bounded_stable, growth_witness, inconclusive };
const char* verdict_name(Verdict v);

struct ProbeThresholds {
    double drift = 0.10;   // max relative change per consecutive R pair
    double r2_min = 0.90;  // growth regression quality
};

struct ProbeReport {
    std::string experiment;
    Dimensions dims{1.5, 3.0};
    double p = 0.0;
    double q = 0.0;  // 0 when not applicable
    std::vector<double> R;
    std::vector<double> ratio;  // sup over the family, one entry per R
    Verdict verdict = Verdict::inconclusive;
    double fit_slope = 0.0;  // regression of ratio against the growth covariate
    double fit_r2 = 0.0;
    std::uint64_t seed = 0;
    int n_nodes = 0;  // nodes per side
    ProbeThresholds thresholds;
    std::string note;  // excluded-mode warnings etc.
};

// Linear regression of ratio against covariate; returns the verdict under
// the thresholds and fills slope/r2.
Verdict classify_sweep(const std::vector<double>& ratio,
                       const std::vector<double>& covariate,
                       const ProbeThresholds& th, double* slope, double* r2);

using BrokenFn = std::function<double(const BrokenPoint&)>;

// Seeded random test family: compactly supported bumps at log-spaced
// centers/widths, power-law tails with exponents inside the L^p convergence
// region, and finite unions of indicator intervals. s0 multiplies by a
// junction cutoff vanishing at radius 1.
struct FamilySpec {
    int bumps = 20;
    int tails = 20;
    int indicators = 10;
    bool s0 = false;
    double p = 2.0;  // admissibility exponent for the tails
    std::uint64_t seed = 20240817;
};

std::vector<BrokenFn> make_family(Dimensions dims, const FamilySpec& spec);
std::vector<BrokenFn> make_indicator_family(int count, std::uint64_t seed);

struct SweepConfig {
    std::vector<double> R;
    int nodes_per_side = 800;
    GridScheme scheme = GridScheme::log;
};

// Weighted node norm of a degree-of-freedom vector.
double dof_lp_norm(const OperatorMatrix& op, const std::vector<double>& f,
                   double p);

// sup_family ||f/|.|||_p / ||f'||_p  (discrete gradient on edges).
ProbeReport hardy_probe(Dimensions dims, double p, const FamilySpec& family,
                        const SweepConfig& sweep);

// Endpoint witness at p = d_*: truncated-logarithm profiles whose ratio
// grows with R; covariate log(log R).
ProbeReport hardy_witness_probe(Dimensions dims, const SweepConfig& sweep);

// sup_family ||grad Delta^{-1/2} f||_p / ||f||_p per (p, R).
std::vector<ProbeReport> riesz_lp_probe(Dimensions dims,
                                        const std::vector<double>& p_list,
                                        const FamilySpec& family,
                                        const SweepConfig& sweep);

// Same ratio driven by the unboundedness witness at p (default p0);
// covariate log(1 + log R).
ProbeReport riesz_counterexample_probe(Dimensions dims, double p,
                                       const SweepConfig& sweep);

// sup_family ||Delta^{1/2} f||_p / ||grad f||_p per (p, R).
std::vector<ProbeReport> reverse_riesz_probe(Dimensions dims,
                                             const std::vector<double>& p_list,
                                             const FamilySpec& family,
                                             const SweepConfig& sweep);

// sup over indicator sets of the L^{p0,1} -> L^{p0,infty} ratio of the
// Riesz transform.
ProbeReport restricted_weak_probe(Dimensions dims, int set_count,
                                  const SweepConfig& sweep,
                                  std::uint64_t seed = 20240817);

// max over random (f, g) pairs of the normalized defect of
// <Delta^{1/2} f, g> = <grad f, grad Delta^{-1/2} g>. Pairs with excluded
// spectral mass are flagged in the note and skipped.
ProbeReport duality_identity_probe(Dimensions dims, double R, int nodes,
                                   int pairs, std::uint64_t seed = 20240817);

}  // namespace blx

#endif
