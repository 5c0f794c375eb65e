#include "oobleck/fleet/fleet.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <queue>
#include <stdexcept>
#include <utility>

#include "oobleck/util/parallel.hpp"

namespace oobleck::fleet {

std::string_view to_string(Mode m) { return m == Mode::Sfa ? "sfa" : "vfa"; }
std::string_view to_string(Regime r) { return r == Regime::FixedTime ? "fixed-time" : "fixed-throughput"; }

void DcScenario::validate() const {
    if (!(fault_prob >= 0.0 && fault_prob <= 1.0)) throw std::invalid_argument("fault probability must lie in [0, 1]");
    if (chips == 0) throw std::invalid_argument("the fleet needs at least one chip");
    if (mode == Mode::Vfa) {
        if (max_faults < 1) throw std::invalid_argument("max_faults must be at least 1");
        if (degradation.size() != max_faults) {
            throw std::invalid_argument("degradation needs one entry per fault level (" + std::to_string(max_faults) +
                                        "), got " + std::to_string(degradation.size()));
        }
        if (degradation.front() != 1.0) throw std::invalid_argument("degradation must start at 1.0");
        for (std::size_t i = 0; i < degradation.size(); ++i) {
            if (!(degradation[i] > 0.0 && degradation[i] <= 1.0)) {
                throw std::invalid_argument("degradation entries must lie in (0, 1]");
            }
            if (i > 0 && degradation[i] > degradation[i - 1]) {
                throw std::invalid_argument("degradation must be non-increasing");
            }
        }
    }
    if (regime == Regime::FixedThroughput && throughput_target == 0.0) {
        throw std::invalid_argument("throughput target must be positive");
    }
}

std::uint32_t DcScenario::effective_max_faults() const { return mode == Mode::Sfa ? 1 : max_faults; }

std::vector<double> DcScenario::effective_degradation() const {
    return mode == Mode::Sfa ? std::vector<double>{1.0} : degradation;
}

double DcScenario::effective_target() const {
    return throughput_target < 0.0 ? static_cast<double>(chips) : throughput_target;
}

namespace {

std::seed_seq seed_for(std::uint64_t seed, std::uint64_t chip) {
    return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(chip), static_cast<std::uint32_t>(chip >> 32)};
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t chip) {
    std::seed_seq seq = seed_for(seed, chip);
    return std::mt19937_64(seq);
}

}  // namespace

FaultStream::FaultStream(std::uint64_t seed, std::uint64_t chip, double p, std::uint64_t first_tick)
    : rng_(make_rng(seed, chip)),
      gap_(p > 0.0 && p < 1.0 ? p : 0.5),
      p_(p),
      cursor_(first_tick) {}

std::uint64_t FaultStream::next() {
    if (p_ <= 0.0 || cursor_ == kNever) return kNever;
    std::uint64_t t = cursor_;
    if (p_ < 1.0) {
        const std::uint64_t gap = gap_(rng_);
        t = gap > kNever - 1 - cursor_ ? kNever - 1 : cursor_ + gap;
    }
    cursor_ = t + 1;
    return t;
}

FleetResult simulate_fixed_time(const DcScenario& s) {
    s.validate();
    const std::uint32_t m = s.effective_max_faults();
    const std::vector<double> deg = s.effective_degradation();

    FleetResult res;
    // Throughput lost relative to a healthy fleet, as a difference array
    // over ticks when a series is requested.
    double lost = 0.0;
    std::vector<double> delta;
    if (s.record_series) delta.assign(s.ticks + 1, 0.0);
    auto lose = [&](std::uint64_t from, std::uint64_t to, double amount) {
        if (from >= to || amount == 0.0) return;
        lost += amount * static_cast<double>(to - from);
        if (s.record_series) {
            delta[from] += amount;
            delta[to] -= amount;
        }
    };

    for (std::uint64_t chip = 0; chip < s.chips; ++chip) {
        FaultStream stream(s.seed, chip, s.fault_prob);
        std::uint32_t level = 0;
        std::uint64_t since = 0;  // start of the interval spent at `level`
        for (std::uint64_t t = stream.next(); t < s.ticks; t = stream.next()) {
            ++res.faults;
            lose(since, t, 1.0 - deg[level]);
            ++level;
            if (level >= m) {
                // Dead for the rest of this tick, replaced by the next one.
                ++res.replacements_or_purchases;
                lose(t, t + 1, 1.0);
                level = 0;
                since = t + 1;
            } else {
                since = t;
            }
        }
        lose(since, s.ticks, 1.0 - deg[level]);
    }

    res.aggregate_throughput = static_cast<double>(s.chips) * static_cast<double>(s.ticks) - lost;
    if (s.record_series) {
        res.series.resize(s.ticks);
        double running = 0.0;
        for (std::uint64_t t = 0; t < s.ticks; ++t) {
            running += delta[t];
            res.series[t] = static_cast<double>(s.chips) - running;
        }
    }
    return res;
}

FleetResult simulate_fixed_throughput(const DcScenario& s) {
    s.validate();
    const std::uint32_t m = s.effective_max_faults();
    const std::vector<double> deg = s.effective_degradation();
    const double target = s.effective_target();

    struct Chip {
        FaultStream stream;
        std::uint32_t level = 0;
    };
    std::vector<Chip> chips;
    chips.reserve(s.chips);
    using Event = std::pair<std::uint64_t, std::uint64_t>;  // (tick, chip id)
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    std::vector<std::uint64_t> at_level(m, 0);

    auto add_chip = [&](std::uint64_t first_tick) {
        const std::uint64_t id = chips.size();
        chips.push_back({FaultStream(s.seed, id, s.fault_prob, first_tick), 0});
        ++at_level[0];
        const std::uint64_t t = chips.back().stream.next();
        if (t < s.ticks) events.emplace(t, id);
    };
    for (std::uint64_t i = 0; i < s.chips; ++i) add_chip(0);

    FleetResult res;
    if (s.record_series) res.series.reserve(s.ticks);
    std::uint64_t pending = 0;
    const double slack = 1e-9 * std::max(1.0, target);
    for (std::uint64_t t = 0; t < s.ticks; ++t) {
        for (; pending > 0; --pending) add_chip(t);
        while (!events.empty() && events.top().first == t) {
            const std::uint64_t id = events.top().second;
            events.pop();
            ++res.faults;
            Chip& c = chips[id];
            --at_level[c.level];
            if (++c.level >= m) continue;  // dead; it contributes nothing from now on
            ++at_level[c.level];
            const std::uint64_t next = c.stream.next();
            if (next < s.ticks) events.emplace(next, id);
        }

        double capacity = 0.0;
        for (std::uint32_t j = 0; j < m; ++j) capacity += static_cast<double>(at_level[j]) * deg[j];
        res.aggregate_throughput += capacity;
        if (s.record_series) res.series.push_back(capacity);

        if (capacity < target - slack) {
            pending = static_cast<std::uint64_t>(std::ceil(target - capacity - slack));
            res.replacements_or_purchases += pending;
        }
    }
    return res;
}

FleetResult simulate(const DcScenario& s) {
    return s.regime == Regime::FixedTime ? simulate_fixed_time(s) : simulate_fixed_throughput(s);
}

std::vector<FleetResult> simulate_seeds(const DcScenario& s, std::uint64_t count) {
    s.validate();
    std::vector<FleetResult> out(count);
    util::parallel_for(count, [&](std::size_t i) {
        DcScenario local = s;
        local.seed = s.seed + i;
        out[i] = simulate(local);
    });
    return out;
}

double expected_replacements(double p, std::uint64_t ticks, std::uint64_t chips, Mode mode,
                             std::uint32_t max_faults) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("fault probability must lie in [0, 1]");
    const double n = static_cast<double>(chips);
    if (mode == Mode::Sfa) return n * static_cast<double>(ticks) * p;
    if (max_faults < 1) throw std::invalid_argument("max_faults must be at least 1");
    if (p == 0.0 || ticks < max_faults) return 0.0;
    if (p == 1.0) return n;

    // Upper tail of Binomial(ticks, p), summed term by term in log space.
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double nt = static_cast<double>(ticks);
    double tail = 0.0;
    for (std::uint64_t k = max_faults; k <= ticks; ++k) {
        const double kd = static_cast<double>(k);
        const double log_term =
            std::lgamma(nt + 1) - std::lgamma(kd + 1) - std::lgamma(nt - kd + 1) + kd * lp + (nt - kd) * lq;
        const double term = std::exp(log_term);
        tail += term;
        if (kd > nt * p && term < tail * 1e-17) break;
    }
    return n * std::min(1.0, tail);
}

const char* const kFleetCsvHeader = "mode,regime,p,chips,ticks,max_faults,seed,replacements_or_purchases,aggregate_throughput";

std::string csv_line(const DcScenario& s, std::uint64_t seed, const FleetResult& r) {
    char p[32];
    std::snprintf(p, sizeof p, "%.9g", s.fault_prob);
    char agg[48];
    std::snprintf(agg, sizeof agg, "%.6f", r.aggregate_throughput);
    std::string out;
    out += std::string(to_string(s.mode)) + ',' + std::string(to_string(s.regime)) + ',' + p + ',';
    out += std::to_string(s.chips) + ',' + std::to_string(s.ticks) + ',' + std::to_string(s.effective_max_faults()) +
           ',';
    out += std::to_string(seed) + ',' + std::to_string(r.replacements_or_purchases) + ',' + agg;
    return out;
}

}  // namespace oobleck::fleet
