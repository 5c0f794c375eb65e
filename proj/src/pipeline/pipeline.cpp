#include "oobleck/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oobleck::pipeline {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::StageIsFaulted: return "StageIsFaulted";
        case ErrorKind::NoFeasibleT: return "NoFeasibleT";
        case ErrorKind::InterfaceMismatch: return "InterfaceMismatch";
        case ErrorKind::NeverValid: return "NeverValid";
    }
    return "?";
}

PipelineError::PipelineError(ErrorKind kind, const std::string& message, std::optional<std::size_t> stage)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), stage_(stage) {}

std::string_view to_string(Fallback f) { return f == Fallback::Software ? "sw" : "fpga"; }
std::string_view to_string(FpgaRouting r) { return r == FpgaRouting::ThroughSoftware ? "through-sw" : "direct"; }

StageSpec StageSpec::synthetic(Cycles hw, Cycles sw) { return {hw, sw, nullptr}; }

StageSpec StageSpec::module_backed(std::shared_ptr<const visc::CompiledModule> m, Cycles hw, Cycles sw) {
    return {hw, sw, std::move(m)};
}

Cycles PipelineSpec::sw_total_cycles() const {
    Cycles total = 0;
    for (const StageSpec& s : stages) total += s.sw_cycles;
    return total;
}

PipelineSpec PipelineSpec::uniform(Cycles sw_total, std::size_t n, double speedup, std::optional<Cycles> hw_per_stage) {
    if (n == 0) throw PipelineError(ErrorKind::InvalidSpec, "a pipeline needs at least one stage");
    if (!(speedup >= 1.0)) throw PipelineError(ErrorKind::InvalidSpec, "hardware speedup must be at least 1");
    const Cycles sw = (sw_total + n - 1) / n;
    const Cycles hw = hw_per_stage ? *hw_per_stage
                                   : static_cast<Cycles>(std::ceil(static_cast<double>(sw_total) /
                                                                   (static_cast<double>(n) * speedup)));
    PipelineSpec p;
    p.stages.assign(n, StageSpec::synthetic(hw, sw));
    p.validate();
    return p;
}

void PipelineSpec::validate() const {
    if (stages.empty()) throw PipelineError(ErrorKind::InvalidSpec, "a pipeline needs at least one stage");
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const StageSpec& s = stages[i];
        if (s.hw_cycles < 1) throw PipelineError(ErrorKind::InvalidSpec, "hw_cycles must be at least 1", i);
        if (s.sw_cycles < s.hw_cycles) {
            throw PipelineError(ErrorKind::InvalidSpec,
                                "sw_cycles (" + std::to_string(s.sw_cycles) + ") below hw_cycles (" +
                                    std::to_string(s.hw_cycles) + ") at stage " + std::to_string(i),
                                i);
        }
    }
}

void LatencyParams::validate() const {
    if (!(fpga_speedup >= min_fpga_speedup && fpga_speedup <= max_fpga_speedup)) {
        throw PipelineError(ErrorKind::InvalidSpec, "fpga speedup " + std::to_string(fpga_speedup) +
                                                        " outside [" + std::to_string(min_fpga_speedup) + ", " +
                                                        std::to_string(max_fpga_speedup) + "]");
    }
}

FaultScenario FaultScenario::with(const std::vector<std::size_t>& stages, Fallback fallback) {
    FaultScenario f;
    for (std::size_t s : stages) f.faults[s] = fallback;
    return f;
}

std::set<std::size_t> FaultScenario::mask() const {
    std::set<std::size_t> out;
    for (const auto& [i, fb] : faults) out.insert(i);
    return out;
}

void FaultScenario::validate(std::size_t n) const {
    for (const auto& [i, fb] : faults) {
        if (i >= n) {
            throw PipelineError(ErrorKind::InvalidSpec,
                                "fault at stage " + std::to_string(i) + " but the pipeline has " + std::to_string(n) +
                                    " stages",
                                i);
        }
    }
}

std::uint8_t config_bits(const FaultScenario& scenario, const PipelineSpec& pipeline, std::size_t stage) {
    const std::size_t n = pipeline.size();
    if (stage >= n) throw PipelineError(ErrorKind::InvalidSpec, "stage index out of range", stage);
    if (scenario.is_faulted(stage)) {
        throw PipelineError(ErrorKind::StageIsFaulted,
                            "stage " + std::to_string(stage) + " is faulted and bypassed; it has no configuration",
                            stage);
    }
    const bool pull = stage == 0 || scenario.is_faulted(stage - 1);
    const bool push = stage + 1 == n || scenario.is_faulted(stage + 1);
    return static_cast<std::uint8_t>((pull ? 0b10 : 0) | (push ? 0b01 : 0));
}

std::size_t healthy_segments(const std::set<std::size_t>& mask, std::size_t n) {
    std::size_t segments = 0;
    bool in_segment = false;
    for (std::size_t i = 0; i < n; ++i) {
        const bool healthy = !mask.contains(i);
        if (healthy && !in_segment) ++segments;
        in_segment = healthy;
    }
    return segments;
}

CycleBreakdown total_cycles(const PipelineSpec& p, const FaultScenario& f, const LatencyParams& l) {
    p.validate();
    f.validate(p.size());

    CycleBreakdown b;
    std::set<std::size_t> bypassed;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const StageSpec& s = p.stages[i];
        auto it = f.faults.find(i);
        if (it == f.faults.end()) {
            b.hw_cycles += s.hw_cycles;
            continue;
        }
        if (it->second == Fallback::Software) {
            b.fallback_cycles += s.sw_cycles;
            bypassed.insert(i);
            continue;
        }
        l.validate();
        b.fallback_cycles += static_cast<Cycles>(std::ceil(static_cast<double>(s.sw_cycles) / l.fpga_speedup));
        if (l.routing == FpgaRouting::ThroughSoftware) {
            b.crossing_cycles += 2 * l.transmission;
            bypassed.insert(i);
        }
    }
    b.healthy_segments = healthy_segments(bypassed, p.size());
    b.crossing_cycles += 2 * l.transmission * b.healthy_segments;
    b.total_cycles = b.hw_cycles + b.fallback_cycles + b.crossing_cycles;
    return b;
}

double speedup(const PipelineSpec& p, const FaultScenario& f, const LatencyParams& l) {
    const CycleBreakdown b = total_cycles(p, f, l);
    return static_cast<double>(p.sw_total_cycles()) / static_cast<double>(b.total_cycles);
}

namespace {

// total_cycles is affine in T, so each observation reduces to
// sw / (a + b T).
struct AffineModel {
    double sw = 0;
    double a = 0;
    double b = 0;
    double target = 1;

    double predicted(Cycles t) const { return sw / (a + b * static_cast<double>(t)); }
    double residual(Cycles t) const { return predicted(t) / target - 1.0; }
};

std::vector<AffineModel> affine_models(const std::vector<Observation>& observations, const LatencyParams& base) {
    std::vector<AffineModel> out;
    for (const Observation& o : observations) {
        if (!(o.target_speedup > 0)) throw std::invalid_argument("target speedups must be positive");
        LatencyParams l = base;
        l.transmission = 0;
        const Cycles a = total_cycles(o.pipeline, o.scenario, l).total_cycles;
        l.transmission = 1;
        const Cycles a1 = total_cycles(o.pipeline, o.scenario, l).total_cycles;
        out.push_back({static_cast<double>(o.pipeline.sw_total_cycles()), static_cast<double>(a),
                       static_cast<double>(a1 - a), o.target_speedup});
    }
    return out;
}

}  // namespace

CalibrationResult calibrate_transmission(const std::vector<Observation>& observations,
                                         const CalibrationOptions& options) {
    if (observations.empty()) throw std::invalid_argument("calibration needs at least one observation");
    const std::vector<AffineModel> models = affine_models(observations, options.base);

    Cycles best_t = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (Cycles t = 0; t <= options.max_transmission; ++t) {
        double sse = 0;
        for (const AffineModel& m : models) {
            const double r = m.residual(t);
            sse += r * r;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_t = t;
        }
    }

    CalibrationResult res;
    res.transmission = best_t;
    res.sum_squared_residuals = best_sse;
    for (const AffineModel& m : models) {
        res.predicted.push_back(m.predicted(best_t));
        res.residuals.push_back(m.residual(best_t));
        res.max_abs_residual = std::max(res.max_abs_residual, std::abs(res.residuals.back()));
    }
    if (res.max_abs_residual > options.max_relative_residual) {
        std::string msg = "best T = " + std::to_string(best_t) + " leaves a relative residual of " +
                          std::to_string(res.max_abs_residual) + ", above the bound " +
                          std::to_string(options.max_relative_residual);
        throw PipelineError(ErrorKind::NoFeasibleT, msg);
    }
    return res;
}

std::optional<std::pair<Cycles, Cycles>> feasible_transmission_band(const std::vector<Observation>& observations,
                                                                    const CalibrationOptions& options) {
    const std::vector<AffineModel> models = affine_models(observations, options.base);
    std::optional<std::pair<Cycles, Cycles>> band;
    for (Cycles t = 0; t <= options.max_transmission; ++t) {
        const bool ok = std::all_of(models.begin(), models.end(), [&](const AffineModel& m) {
            return std::abs(m.residual(t)) <= options.max_relative_residual;
        });
        if (!ok) continue;
        if (!band) band.emplace(t, t);
        band->second = t;
    }
    return band;
}

std::string_view to_string(Placement p) {
    switch (p) {
        case Placement::Spread: return "spread";
        case Placement::Head: return "head";
        case Placement::Tail: return "tail";
        case Placement::Contiguous: return "contiguous";
        case Placement::Worst: return "worst";
    }
    return "?";
}

std::optional<Placement> parse_placement(std::string_view text) {
    for (Placement p : {Placement::Spread, Placement::Head, Placement::Tail, Placement::Contiguous, Placement::Worst}) {
        if (text == to_string(p)) return p;
    }
    return std::nullopt;
}

namespace {

double binomial(std::size_t n, std::size_t k) {
    double r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

std::vector<std::size_t> worst_placement(const PipelineSpec& p, std::size_t k, const LatencyParams& l,
                                         Fallback fallback) {
    const std::size_t n = p.size();
    if (binomial(n, k) > 2'000'000) {
        throw std::invalid_argument("worst-case placement search over C(" + std::to_string(n) + ", " +
                                    std::to_string(k) + ") subsets is too large");
    }
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    std::vector<std::size_t> best = pick;
    Cycles best_total = 0;
    bool first = true;
    for (;;) {
        const Cycles t = total_cycles(p, FaultScenario::with(pick, fallback), l).total_cycles;
        if (first || t > best_total) {
            best_total = t;
            best = pick;
            first = false;
        }
        // Advance to the next k-subset in lexicographic order.
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

}  // namespace

std::vector<std::size_t> place_faults(const PipelineSpec& p, std::size_t k, Placement placement,
                                      const LatencyParams& l, Fallback fallback) {
    const std::size_t n = p.size();
    if (k > n) {
        throw std::invalid_argument("cannot place " + std::to_string(k) + " faults in " + std::to_string(n) +
                                    " stages");
    }
    std::vector<std::size_t> out;
    if (k == 0) return out;
    switch (placement) {
        case Placement::Spread:
            for (std::size_t i = 0; i < k; ++i) out.push_back(((2 * i + 1) * n) / (2 * k));
            break;
        case Placement::Head:
            for (std::size_t i = 0; i < k; ++i) out.push_back(i);
            break;
        case Placement::Tail:
            for (std::size_t i = n - k; i < n; ++i) out.push_back(i);
            break;
        case Placement::Contiguous:
            for (std::size_t i = 0; i < k; ++i) out.push_back((n - k) / 2 + i);
            break;
        case Placement::Worst: return worst_placement(p, k, l, fallback);
    }
    return out;
}

}  // namespace oobleck::pipeline
