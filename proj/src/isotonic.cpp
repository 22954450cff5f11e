#include "sccp/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sccp {

IsotonicFit::IsotonicFit(std::vector<double> breakpoints, std::vector<double> values,
                         std::vector<double> masses)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      masses_(std::move(masses)) {
    if (values_.empty() || values_.size() != masses_.size() ||
        values_.size() != breakpoints_.size() + 1) {
        throw std::invalid_argument("inconsistent isotonic fit shape");
    }
}

std::size_t IsotonicFit::segment_index(double t) const {
    if (!std::isfinite(t)) throw std::invalid_argument("non-finite input");
    return static_cast<std::size_t>(
        std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) -
        breakpoints_.begin());
}

double IsotonicFit::evaluate(double t) const {
    return values_[segment_index(t)];
}

namespace detail {

PooledProblem PooledProblem::build(std::span<const WeightedSample> samples) {
    if (samples.empty()) throw std::invalid_argument("empty sample");
    double positive = 0.0;
    for (const auto& s : samples) {
        if (!std::isfinite(s.position) || !std::isfinite(s.outcome) ||
            !std::isfinite(s.weight)) {
            throw std::invalid_argument("non-finite input");
        }
        if (s.weight < 0.0) throw std::invalid_argument("negative weight");
        positive += s.weight;
    }
    if (positive <= 0.0) throw std::invalid_argument("no positive weight");

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return samples[a].position < samples[b].position;
    });

    PooledProblem p;
    p.sorted_pos.reserve(samples.size());
    p.sorted_y.reserve(samples.size());
    p.sorted_w.reserve(samples.size());
    for (std::size_t i : order) {
        if (samples[i].weight == 0.0) continue;  // carries no information
        p.sorted_pos.push_back(samples[i].position);
        p.sorted_y.push_back(samples[i].outcome);
        p.sorted_w.push_back(samples[i].weight);
    }

    const std::size_t n = p.sorted_pos.size();
    p.block_start.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 || p.sorted_pos[i] != p.sorted_pos[i - 1]) {
            if (i != 0) p.block_start.push_back(i);
            p.block_pos.push_back(p.sorted_pos[i]);
        }
    }
    p.block_start.push_back(n);

    const std::size_t nb = p.block_pos.size();
    p.prefix_w.assign(nb + 1, 0.0);
    p.prefix_wy.assign(nb + 1, 0.0);
    double w_acc = 0.0, wy_acc = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        for (std::size_t i = p.block_start[b]; i < p.block_start[b + 1]; ++i) {
            w_acc += p.sorted_w[i];
            wy_acc += p.sorted_w[i] * p.sorted_y[i];
        }
        p.prefix_w[b + 1] = w_acc;
        p.prefix_wy[b + 1] = wy_acc;
    }
    p.total_weight = w_acc;
    return p;
}

double BlockSums::position(std::size_t i) const {
    if (!aug || tie) return base->block_pos[i];
    if (i < slot) return base->block_pos[i];
    if (i == slot) return aug_pos;
    return base->block_pos[i - 1];
}

double BlockSums::prefix_w(std::size_t k) const {
    if (!aug) return base->prefix_w[k];
    const std::size_t kb = tie ? k : (k > slot ? k - 1 : k);
    double v = base->prefix_w[kb];
    if (k > slot) v += aug_w;
    return v;
}

double BlockSums::prefix_wy(std::size_t k) const {
    if (!aug) return base->prefix_wy[k];
    const std::size_t kb = tie ? k : (k > slot ? k - 1 : k);
    double v = base->prefix_wy[kb];
    if (k > slot) v += aug_w * aug_y;
    return v;
}

BlockSums plain_view(const PooledProblem& p) {
    BlockSums bs;
    bs.base = &p;
    return bs;
}

BlockSums augmented_view(const PooledProblem& p, double pos, double y, double w) {
    if (!std::isfinite(pos) || !std::isfinite(y) || !std::isfinite(w)) {
        throw std::invalid_argument("non-finite input");
    }
    BlockSums bs;
    bs.base = &p;
    bs.aug = true;
    bs.aug_pos = pos;
    bs.aug_y = y;
    bs.aug_w = w;
    const auto it = std::lower_bound(p.block_pos.begin(), p.block_pos.end(), pos);
    bs.slot = static_cast<std::size_t>(it - p.block_pos.begin());
    bs.tie = it != p.block_pos.end() && *it == pos;
    return bs;
}

SegmentEnds pava_pass(const BlockSums& bs, const SegmentEnds& group_ends) {
    SegmentEnds ends;
    ends.reserve(group_ends.size());
    std::vector<double> means;
    means.reserve(group_ends.size());
    std::size_t start = 0;
    for (std::size_t e : group_ends) {
        ends.push_back(e);
        means.push_back(bs.mean(start, e));
        start = e;
        while (ends.size() >= 2 && means[means.size() - 2] >= means.back()) {
            ends[ends.size() - 2] = ends.back();
            ends.pop_back();
            means.pop_back();
            const std::size_t lo = ends.size() >= 2 ? ends[ends.size() - 2] : 0;
            means.back() = bs.mean(lo, ends.back());
        }
    }
    return ends;
}

SegmentEnds mass_atoms(const BlockSums& bs, double min_segment_mass) {
    const std::size_t nb = bs.blocks();
    SegmentEnds atoms;
    if (min_segment_mass <= 0.0) {
        atoms.resize(nb);
        for (std::size_t b = 0; b < nb; ++b) atoms[b] = b + 1;
        return atoms;
    }
    double acc = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        acc += bs.weight(b, b + 1);
        if (acc >= min_segment_mass) {
            atoms.push_back(b + 1);
            acc = 0.0;
        }
    }
    if (atoms.empty() || atoms.back() != nb) {
        // Fold an undersized tail into the last complete atom.
        if (atoms.empty()) {
            atoms.push_back(nb);
        } else {
            atoms.back() = nb;
        }
    }
    return atoms;
}

SegmentEnds solve_monotone(const BlockSums& bs, double min_segment_mass) {
    if (min_segment_mass < 0.0) {
        throw std::invalid_argument("min_segment_mass must be nonnegative");
    }
    return pava_pass(bs, mass_atoms(bs, min_segment_mass));
}

SegmentStats segment_stats(const BlockSums& bs, std::size_t block_lo,
                           std::size_t block_hi) {
    const PooledProblem& p = *bs.base;
    std::size_t base_lo = block_lo, base_hi = block_hi;
    bool contains_aug = false;
    std::size_t aug_slot = 0;
    if (bs.aug) {
        contains_aug = block_lo <= bs.slot && bs.slot < block_hi;
        if (bs.tie) {
            aug_slot = p.block_start[bs.slot + 1];  // after the tied samples
        } else {
            aug_slot = p.block_start[bs.slot];
            if (block_lo > bs.slot) base_lo = block_lo - 1;
            if (block_hi > bs.slot) base_hi = block_hi - 1;
        }
    }
    const std::size_t s0 = p.block_start[base_lo];
    const std::size_t s1 = p.block_start[base_hi];
    SegmentStats st;
    for (std::size_t i = s0; i < s1; ++i) {
        if (contains_aug && i == aug_slot) {
            st.weight += bs.aug_w;
            st.weighted_outcome += bs.aug_w * bs.aug_y;
        }
        st.weight += p.sorted_w[i];
        st.weighted_outcome += p.sorted_w[i] * p.sorted_y[i];
    }
    if (contains_aug && aug_slot >= s1) {
        st.weight += bs.aug_w;
        st.weighted_outcome += bs.aug_w * bs.aug_y;
    }
    return st;
}

IsotonicFit build_fit(const BlockSums& bs, const SegmentEnds& ends) {
    std::vector<double> values, masses, breakpoints;
    values.reserve(ends.size());
    masses.reserve(ends.size());
    breakpoints.reserve(ends.size() - 1);
    std::size_t start = 0;
    for (std::size_t s = 0; s < ends.size(); ++s) {
        const SegmentStats st = segment_stats(bs, start, ends[s]);
        values.push_back(st.value());
        masses.push_back(st.weight);
        if (s + 1 < ends.size()) {
            breakpoints.push_back(
                0.5 * (bs.position(ends[s] - 1) + bs.position(ends[s])));
        }
        start = ends[s];
    }
    return IsotonicFit(std::move(breakpoints), std::move(values), std::move(masses));
}

}  // namespace detail

IsotonicFit fit_isotonic(std::span<const WeightedSample> samples,
                         double min_segment_mass) {
    const detail::PooledProblem p = detail::PooledProblem::build(samples);
    const detail::BlockSums bs = detail::plain_view(p);
    const detail::SegmentEnds ends = detail::solve_monotone(bs, min_segment_mass);
    return detail::build_fit(bs, ends);
}

}  // namespace sccp
