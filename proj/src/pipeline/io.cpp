#include "oobleck/pipeline/io.hpp"

#include <json.hpp>
#include <type_traits>

namespace oobleck::pipeline {
namespace {

using Json = nlohmann::json;

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
}

template <class T>
T get(const Json& obj, const char* key) {
    if (!obj.contains(key)) throw std::invalid_argument(std::string("missing field `") + key + "`");
    if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
        // The library would wrap -1 silently.
        if (!obj.at(key).is_number_unsigned()) {
            throw std::invalid_argument(std::string("field `") + key + "` must be a nonnegative integer");
        }
    }
    try {
        return obj.at(key).get<T>();
    } catch (const Json::exception&) {
        throw std::invalid_argument(std::string("field `") + key + "` has the wrong type");
    }
}

template <class T>
T get_or(const Json& obj, const char* key, T fallback) {
    return obj.contains(key) ? get<T>(obj, key) : fallback;
}

Fallback parse_fallback(const std::string& s) {
    if (s == "sw" || s == "software") return Fallback::Software;
    if (s == "fpga") return Fallback::Fpga;
    throw std::invalid_argument("unknown fallback `" + s + "` (expected sw or fpga)");
}

FpgaRouting parse_routing(const std::string& s) {
    if (s == "through-sw") return FpgaRouting::ThroughSoftware;
    if (s == "direct") return FpgaRouting::Direct;
    throw std::invalid_argument("unknown fpga routing `" + s + "` (expected through-sw or direct)");
}

PipelineSpec pipeline_from(const Json& doc) {
    if (doc.contains("stage_cycles")) {
        PipelineSpec p;
        for (const Json& s : doc.at("stage_cycles")) {
            p.stages.push_back(StageSpec::synthetic(get<Cycles>(s, "hw"), get<Cycles>(s, "sw")));
        }
        p.validate();
        return p;
    }
    std::optional<Cycles> hw;
    if (doc.contains("hw_cycles_per_stage") && !doc.at("hw_cycles_per_stage").is_null()) {
        hw = get<Cycles>(doc, "hw_cycles_per_stage");
    }
    return PipelineSpec::uniform(get<Cycles>(doc, "sw_cycles"), get<std::size_t>(doc, "stages"),
                                 get<double>(doc, "speedup"), hw);
}

}  // namespace

ScenarioFile parse_scenario_json(const std::string& text) {
    const Json doc = parse(text);
    if (!doc.is_object()) throw std::invalid_argument("scenario must be a JSON object");
    ScenarioFile out;
    out.pipeline = pipeline_from(doc);
    out.latency.transmission = get_or<Cycles>(doc, "transmission", 0);
    out.latency.fpga_speedup = get_or<double>(doc, "fpga_speedup", out.latency.fpga_speedup);
    out.latency.routing = parse_routing(get_or<std::string>(doc, "fpga_routing", "through-sw"));
    const Fallback default_fb = parse_fallback(get_or<std::string>(doc, "fallback", "sw"));
    if (doc.contains("faults")) {
        for (const Json& f : doc.at("faults")) {
            if (f.is_number_unsigned()) {
                out.faults.faults[f.get<std::size_t>()] = default_fb;
            } else if (f.is_object()) {
                out.faults.faults[get<std::size_t>(f, "stage")] =
                    parse_fallback(get_or<std::string>(f, "fallback", std::string(to_string(default_fb))));
            } else {
                throw std::invalid_argument("entries of `faults` must be stage indices or objects");
            }
        }
    }
    out.faults.validate(out.pipeline.size());
    return out;
}

std::vector<Observation> parse_observations_json(const std::string& text) {
    const Json doc = parse(text);
    if (!doc.is_object() || !doc.contains("points") || !doc.at("points").is_array()) {
        throw std::invalid_argument("calibration file needs a `points` array");
    }
    std::vector<Observation> out;
    for (const Json& pt : doc.at("points")) {
        Observation o;
        o.pipeline = pipeline_from(pt);
        o.target_speedup = get<double>(pt, "target");
        o.label = get_or<std::string>(pt, "label", "");
        const Json& faults = pt.contains("faults") ? pt.at("faults") : Json(0);
        if (faults.is_array()) {
            std::vector<std::size_t> stages;
            for (const Json& f : faults) {
                if (!f.is_number_unsigned()) throw std::invalid_argument("entries of `faults` must be stage indices");
                stages.push_back(f.get<std::size_t>());
            }
            o.scenario = FaultScenario::with(stages);
        } else {
            const std::string name = get_or<std::string>(pt, "placement", "spread");
            const auto placement = parse_placement(name);
            if (!placement) throw std::invalid_argument("unknown placement `" + name + "`");
            o.scenario = FaultScenario::with(place_faults(o.pipeline, get<std::size_t>(pt, "faults"), *placement));
        }
        o.scenario.validate(o.pipeline.size());
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace oobleck::pipeline
