#pragma once

#include <span>
#include <vector>

namespace pmqcc {

/// Click / no-click probabilities of the two threshold detectors of one branch.
struct ClickProbabilities {
    double p_left_click = 0.0;
    double p_left_silent = 1.0;
    double p_right_click = 0.0;
    double p_right_silent = 1.0;
};

/// Single-branch statistics. `qber` is the probability that the unexpected
/// (right) port fired, conditioned on exactly one click.
struct BranchStats {
    double gain = 0.0;
    double qber = 0.0;
};

/// Coherent-state interference of two equal-intensity arms.
///
/// `arrival_intensity` is the total mean photon number reaching the branch
/// (both arms combined) and `phase_delta` the relative phase of the arms.
ClickProbabilities click_probabilities(double arrival_intensity, double phase_delta, double dark_count);

/// Exactly-one-click probability and the wrong-port fraction; qber is 0 when gain is 0.
BranchStats branch_success(const ClickProbabilities& cp);

/// Probability that both detectors click, used for the outcome partition.
double branch_double_click(const ClickProbabilities& cp);

/// Slice-averaged branch gain 1 - e^{-a} + 2 p_d e^{-a}.
double branch_gain_avg(double arrival_intensity, double dark_count);

/// Slice-averaged branch QBER (p_d + a e_delta(M)) e^{-a} / Q.
///
/// Throws InsufficientDataError when the gain underflows to zero.
double branch_qber_avg(double arrival_intensity, double dark_count, int slice_count);

/// Triangular density of the relative phase of two matched slices whose
/// references differ by `reference_offset`. Zero outside the support.
double phase_delta_density(double phase_delta, double reference_offset, int slice_count);

/// Exact (unapproximated) branch average over the slice density at a fixed
/// reference offset, by adaptive quadrature. Test oracle for the closed forms.
BranchStats branch_average_exact(double arrival_intensity, double dark_count, int slice_count,
                                 double reference_offset);

/// As above, additionally averaging the reference offset uniformly over [-pi/M, pi/M).
BranchStats branch_average_exact_over_offsets(double arrival_intensity, double dark_count, int slice_count);

/// Exact statistics of a whole chain of N-1 branches whose adjacent parties
/// draw independent uniform phases inside matched slices.
///
/// Branches share the phase of their common party, so the joint success and
/// error parity are obtained by propagating along the chain rather than by
/// multiplying single-branch averages.
struct ChainStats {
    double gain = 0.0;
    /// Entry m-2 is the (P1, Pm) error probability given success, m = 2..N.
    std::vector<double> pair_qbers;
};

ChainStats chain_average_exact(double arrival_intensity, double dark_count, int slice_count,
                               std::span<const double> residual_offsets);

}  // namespace pmqcc
