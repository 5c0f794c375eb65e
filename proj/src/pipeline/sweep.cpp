#include "oobleck/pipeline/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "oobleck/util/parallel.hpp"

namespace oobleck::pipeline {

const char* const kSweepCsvHeader =
    "C,n,S,T,faults,placement,fallback,fpga_speedup,routing,hw_cycles,fallback_cycles,crossing_cycles,total_cycles,"
    "speedup";

std::size_t SweepGrid::point_count() const {
    return sw_cycles.size() * stages.size() * speedups.size() * transmissions.size() * fault_counts.size() *
           placements.size() * fallbacks.size() * fpga_speedups.size() * routings.size();
}

namespace {

// Mixed-radix decode of a flat point index, last axis fastest.
SweepRow point(const SweepGrid& g, std::size_t index) {
    auto take = [&index](const auto& axis) {
        const auto& v = axis[index % axis.size()];
        index /= axis.size();
        return v;
    };
    SweepRow r;
    r.routing = take(g.routings);
    r.fpga_speedup = take(g.fpga_speedups);
    r.fallback = take(g.fallbacks);
    r.placement = take(g.placements);
    r.fault_count = take(g.fault_counts);
    r.transmission = take(g.transmissions);
    r.hw_speedup = take(g.speedups);
    r.stages = take(g.stages);
    r.sw_cycles = take(g.sw_cycles);
    return r;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepGrid& grid) {
    const std::size_t count = grid.point_count();
    std::vector<std::optional<SweepRow>> slots(count);
    util::parallel_for(count, [&](std::size_t i) {
        SweepRow r = point(grid, i);
        if (r.fault_count > r.stages) return;
        const PipelineSpec p = PipelineSpec::uniform(r.sw_cycles, r.stages, r.hw_speedup, grid.hw_per_stage);
        LatencyParams l;
        l.transmission = r.transmission;
        l.fpga_speedup = r.fpga_speedup;
        l.routing = r.routing;
        r.fault_stages = place_faults(p, r.fault_count, r.placement, l, r.fallback);
        const FaultScenario f = FaultScenario::with(r.fault_stages, r.fallback);
        r.breakdown = total_cycles(p, f, l);
        r.speedup = static_cast<double>(p.sw_total_cycles()) / static_cast<double>(r.breakdown.total_cycles);
        slots[i] = std::move(r);
    });
    std::vector<SweepRow> rows;
    for (auto& s : slots) {
        if (s) rows.push_back(std::move(*s));
    }
    return rows;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw std::invalid_argument("grid field `" + key + "`: `" + text + "` is not a number");
    }
    return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    if (v < 0 || v != std::floor(v)) {
        throw std::invalid_argument("grid field `" + key + "`: `" + text + "` is not a nonnegative integer");
    }
    return static_cast<std::uint64_t>(v);
}

// "a,b,c" or "lo:hi:step" (inclusive).
std::vector<double> numeric_values(const std::string& key, const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw std::invalid_argument("grid field `" + key + "`: range must be lo:hi:step");
        const double lo = parse_double(key, trim(parts[0]));
        const double hi = parse_double(key, trim(parts[1]));
        const double step = parse_double(key, trim(parts[2]));
        if (!(step > 0) || hi < lo) throw std::invalid_argument("grid field `" + key + "`: empty or invalid range");
        const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
        for (std::size_t i = 0; i <= steps; ++i) out.push_back(lo + static_cast<double>(i) * step);
        return out;
    }
    for (const std::string& item : split(text, ',')) out.push_back(parse_double(key, trim(item)));
    return out;
}

template <class T>
std::vector<T> counts(const std::string& key, const std::string& text) {
    std::vector<T> out;
    for (double v : numeric_values(key, text)) out.push_back(static_cast<T>(parse_count(key, format_number(v))));
    return out;
}

}  // namespace

SweepGrid parse_grid_spec(const std::string& spec, SweepGrid base) {
    SweepGrid g = std::move(base);
    for (const std::string& raw : split(spec, ';')) {
        const std::string field = trim(raw);
        if (field.empty()) continue;
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("grid field `" + field + "` lacks `=`");
        const std::string key = trim(field.substr(0, eq));
        const std::string value = trim(field.substr(eq + 1));
        if (value.empty()) throw std::invalid_argument("grid field `" + key + "` has no values");

        if (key == "C") {
            g.sw_cycles = counts<Cycles>(key, value);
        } else if (key == "n") {
            g.stages = counts<std::size_t>(key, value);
        } else if (key == "S") {
            g.speedups = numeric_values(key, value);
        } else if (key == "T") {
            g.transmissions = counts<Cycles>(key, value);
        } else if (key == "faults") {
            g.fault_counts = counts<std::size_t>(key, value);
        } else if (key == "s") {
            g.fpga_speedups = numeric_values(key, value);
        } else if (key == "hw") {
            g.hw_per_stage = parse_count(key, value);
        } else if (key == "placement") {
            g.placements.clear();
            for (const std::string& item : split(value, ',')) {
                auto p = parse_placement(trim(item));
                if (!p) throw std::invalid_argument("grid field `placement`: unknown placement `" + item + "`");
                g.placements.push_back(*p);
            }
        } else if (key == "fallback") {
            g.fallbacks.clear();
            for (const std::string& item : split(value, ',')) {
                const std::string v = trim(item);
                if (v == "sw") g.fallbacks.push_back(Fallback::Software);
                else if (v == "fpga") g.fallbacks.push_back(Fallback::Fpga);
                else throw std::invalid_argument("grid field `fallback`: expected sw or fpga, got `" + v + "`");
            }
        } else if (key == "routing") {
            g.routings.clear();
            for (const std::string& item : split(value, ',')) {
                const std::string v = trim(item);
                if (v == "through-sw") g.routings.push_back(FpgaRouting::ThroughSoftware);
                else if (v == "direct") g.routings.push_back(FpgaRouting::Direct);
                else throw std::invalid_argument("grid field `routing`: expected through-sw or direct, got `" + v + "`");
            }
        } else {
            throw std::invalid_argument("unknown grid field `" + key + "`");
        }
    }
    return g;
}

std::string format_number(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::string csv_line(const SweepRow& r) {
    std::string faults;
    for (std::size_t i = 0; i < r.fault_stages.size(); ++i) faults += (i ? " " : "") + std::to_string(r.fault_stages[i]);
    std::ostringstream out;
    out << r.sw_cycles << ',' << r.stages << ',' << format_number(r.hw_speedup) << ',' << r.transmission << ','
        << faults << ',' << to_string(r.placement) << ',' << to_string(r.fallback) << ','
        << format_number(r.fpga_speedup) << ',' << to_string(r.routing) << ',' << r.breakdown.hw_cycles << ','
        << r.breakdown.fallback_cycles << ',' << r.breakdown.crossing_cycles << ',' << r.breakdown.total_cycles << ','
        << format_number(r.speedup);
    return out.str();
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepCsvHeader << '\n';
    for (const SweepRow& r : rows) out << csv_line(r) << '\n';
}

}  // namespace oobleck::pipeline
