#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sccp {

struct WeightedSample {
    double position = 0.0;  // a raw model prediction f(x)
    double outcome = 0.0;   // the observed y
    double weight = 1.0;
};

// Monotone nondecreasing step function over the prediction axis.
// Segment k covers [breakpoints[k-1], breakpoints[k]); evaluation at a
// breakpoint resolves to the right segment, and the function is constant
// beyond the outermost breakpoints.
class IsotonicFit {
public:
    IsotonicFit(std::vector<double> breakpoints, std::vector<double> values,
                std::vector<double> masses);

    std::size_t segment_count() const { return values_.size(); }
    std::size_t segment_index(double t) const;
    double evaluate(double t) const;

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& segment_values() const { return values_; }
    const std::vector<double>& segment_masses() const { return masses_; }

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    std::vector<double> masses_;
};

// Weighted least-squares fit over monotone nondecreasing step functions of
// position, with ties in position pooled up front. When min_segment_mass > 0,
// every segment of the result carries at least that much weight (relaxed to a
// single segment when the total weight is below 2 * min_segment_mass).
IsotonicFit fit_isotonic(std::span<const WeightedSample> samples,
                         double min_segment_mass);

namespace detail {

// Position-pooled, position-sorted representation of a weighted sample set.
// Block statistics come from prefix sums, so solver decisions do not depend
// on the order in which blocks are merged; final segment values are
// recomputed by direct summation over the sample range (see build_fit).
struct PooledProblem {
    std::vector<double> sorted_pos;  // samples, stably sorted by position
    std::vector<double> sorted_y;
    std::vector<double> sorted_w;
    std::vector<double> block_pos;           // distinct positions, ascending
    std::vector<std::size_t> block_start;    // B+1 sample offsets
    std::vector<double> prefix_w;            // B+1 block prefix weights
    std::vector<double> prefix_wy;           // B+1 block prefix weight*outcome
    double total_weight = 0.0;

    static PooledProblem build(std::span<const WeightedSample> samples);
    std::size_t blocks() const { return block_pos.size(); }
};

// A block sequence, optionally with one extra weighted point spliced in.
// Accessors are O(1) on top of the base problem's prefix sums.
struct BlockSums {
    const PooledProblem* base = nullptr;
    bool aug = false;
    bool tie = false;         // augmented position equals block_pos[slot]
    std::size_t slot = 0;     // tie: block joined; otherwise insertion slot
    double aug_pos = 0.0;
    double aug_y = 0.0;
    double aug_w = 0.0;

    std::size_t blocks() const {
        return base->blocks() + ((aug && !tie) ? 1 : 0);
    }
    double position(std::size_t i) const;
    double prefix_w(std::size_t k) const;
    double prefix_wy(std::size_t k) const;
    double weight(std::size_t i, std::size_t j) const {
        return prefix_w(j) - prefix_w(i);
    }
    double mean(std::size_t i, std::size_t j) const {
        return (prefix_wy(j) - prefix_wy(i)) / weight(i, j);
    }
    double total_weight() const { return prefix_w(blocks()); }
};

BlockSums plain_view(const PooledProblem& p);
BlockSums augmented_view(const PooledProblem& p, double pos, double y, double w);

// Segment s covers blocks [ends[s-1], ends[s]) with ends.back() == blocks.
using SegmentEnds = std::vector<std::size_t>;

// Pool-adjacent-violators over the given block grouping.
SegmentEnds pava_pass(const BlockSums& bs, const SegmentEnds& group_ends);

// Position-based atoms for the minimum-mass constraint: blocks are grouped
// left to right until each group carries at least min_segment_mass, with an
// undersized tail folded into its neighbor. The rule reads only positions and
// weights, never outcomes, so every point is treated symmetrically and the
// grouping does not change with an imputed outcome.
SegmentEnds mass_atoms(const BlockSums& bs, double min_segment_mass);

// PAVA over the mass atoms (plain PAVA when the constraint is off).
SegmentEnds solve_monotone(const BlockSums& bs, double min_segment_mass);

// Materializes the fit: breakpoints at midpoints between adjacent distinct
// positions across segment boundaries, values and masses from direct
// left-to-right summation over each segment's samples (with the augmented
// point spliced in at its stable-sort slot).
IsotonicFit build_fit(const BlockSums& bs, const SegmentEnds& ends);

// Weighted sum statistics of one segment, by direct summation.
struct SegmentStats {
    double weight = 0.0;
    double weighted_outcome = 0.0;
    double value() const { return weighted_outcome / weight; }
};
SegmentStats segment_stats(const BlockSums& bs, std::size_t block_lo,
                           std::size_t block_hi);

}  // namespace detail

}  // namespace sccp
