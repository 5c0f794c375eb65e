#pragma once
//
// Monte Carlo model of a data center whose chips accumulate permanent
// faults. A single-fault accelerator (SFA) dies on its first fault; a
// variable-fault accelerator (VFA) keeps running at reduced throughput until
// it has taken max_faults faults.
//
// Faults on chip slot c come from a random stream seeded by (seed, c) alone,
// so an SFA fleet and a VFA fleet simulated with the same seed see exactly
// the same fault ticks.
//

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace oobleck::fleet {

enum class Mode { Sfa, Vfa };
enum class Regime { FixedTime, FixedThroughput };

std::string_view to_string(Mode m);
std::string_view to_string(Regime r);

struct DcScenario {
    std::uint64_t chips = 10'000;
    std::uint64_t ticks = 1'460;
    double fault_prob = 0.0;
    Mode mode = Mode::Vfa;
    /// VFA only: faults a chip survives is max_faults - 1.
    std::uint32_t max_faults = 3;
    /// VFA only: throughput multiplier at 0, 1, ..., max_faults-1 faults.
    std::vector<double> degradation{1.0, 0.5, 1.0 / 3.0};
    Regime regime = Regime::FixedTime;
    /// Fixed-throughput only, in chip equivalents. Negative means `chips`.
    double throughput_target = -1.0;
    std::uint64_t seed = 0;
    bool record_series = false;

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;

    /// Fault threshold and degradation actually simulated. SFA collapses to
    /// a VFA with max_faults = 1 and degradation [1.0].
    std::uint32_t effective_max_faults() const;
    std::vector<double> effective_degradation() const;
    double effective_target() const;
};

struct FleetResult {
    /// Replacements in the fixed-time regime, purchases in fixed-throughput.
    std::uint64_t replacements_or_purchases = 0;
    /// Sum over ticks of the fleet's throughput in chip equivalents.
    double aggregate_throughput = 0.0;
    /// Fault events observed on all chips.
    std::uint64_t faults = 0;
    /// Per-tick throughput; filled only when record_series is set.
    std::vector<double> series;
};

/// The fault ticks of one chip slot, in increasing order.
class FaultStream {
public:
    static constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

    /// Faults strike independently with probability p on each tick from
    /// first_tick onward.
    FaultStream(std::uint64_t seed, std::uint64_t chip, double p, std::uint64_t first_tick = 0);

    /// Tick of the next fault, or kNever.
    std::uint64_t next();

private:
    std::mt19937_64 rng_;
    std::geometric_distribution<std::uint64_t> gap_;
    double p_;
    std::uint64_t cursor_;
};

/// Fixed chip count. A chip that reaches its fault threshold counts as one
/// replacement and is fresh again on the next tick.
FleetResult simulate_fixed_time(const DcScenario& s);

/// Fixed throughput target. Whenever capacity drops below the target, the
/// smallest number of fresh chips restoring it is bought; they start
/// contributing on the next tick. Degraded VFA chips are kept.
FleetResult simulate_fixed_throughput(const DcScenario& s);

/// Dispatches on s.regime.
FleetResult simulate(const DcScenario& s);

/// Runs seeds s.seed, s.seed + 1, ..., s.seed + count - 1 (in parallel) and
/// returns the results in seed order.
std::vector<FleetResult> simulate_seeds(const DcScenario& s, std::uint64_t count);

/// Analytic fixed-time replacement count. SFA: N * ticks * p, exact.
/// VFA: N * P(Binomial(ticks, p) >= max_faults), a first-order estimate that
/// undercounts once p * ticks approaches 1.
double expected_replacements(double p, std::uint64_t ticks, std::uint64_t chips, Mode mode,
                             std::uint32_t max_faults);

extern const char* const kFleetCsvHeader;

std::string csv_line(const DcScenario& s, std::uint64_t seed, const FleetResult& r);

}  // namespace oobleck::fleet
