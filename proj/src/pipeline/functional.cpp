#include "oobleck/pipeline/functional.hpp"

namespace oobleck::pipeline {

std::string_view to_string(ExecutedOn e) {
    switch (e) {
        case ExecutedOn::Hardware: return "hw";
        case ExecutedOn::Software: return "sw";
        case ExecutedOn::Fpga: return "fpga";
    }
    return "?";
}

namespace {

const visc::CycleIR& stage_ir(const PipelineSpec& p, std::size_t i) {
    if (!p.stages[i].is_module_backed()) {
        throw PipelineError(ErrorKind::InterfaceMismatch, "stage " + std::to_string(i) + " has no module", i);
    }
    return p.stages[i].module->ir;
}

std::string describe(const std::vector<visc::PortDef>& ports) {
    std::string s = "(";
    for (std::size_t i = 0; i < ports.size(); ++i) {
        if (i) s += ", ";
        s += ports[i].name + " : " + visc::to_string(ports[i].type);
    }
    return s + ")";
}

bool same_ports(const std::vector<visc::PortDef>& outs, const std::vector<visc::PortDef>& ins) {
    if (outs.size() != ins.size()) return false;
    for (const visc::PortDef& o : outs) {
        bool found = false;
        for (const visc::PortDef& i : ins) found = found || (i.name == o.name && i.type == o.type);
        if (!found) return false;
    }
    return true;
}

}  // namespace

void check_interfaces(const PipelineSpec& stages, const visc::ValueMap* input) {
    if (stages.stages.empty()) throw PipelineError(ErrorKind::InvalidSpec, "a pipeline needs at least one stage");
    if (input) {
        const visc::CycleIR& first = stage_ir(stages, 0);
        bool ok = input->size() == first.inputs.size();
        for (const visc::PortDef& p : first.inputs) {
            auto it = input->find(p.name);
            ok = ok && it != input->end() && it->second.has_type(p.type);
        }
        if (!ok) {
            throw PipelineError(ErrorKind::InterfaceMismatch,
                                "pipeline input does not match stage 0 `" + first.name + "` " +
                                    describe(first.inputs),
                                0);
        }
    }
    for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
        const visc::CycleIR& a = stage_ir(stages, i);
        const visc::CycleIR& b = stage_ir(stages, i + 1);
        if (!same_ports(a.outputs, b.inputs)) {
            throw PipelineError(ErrorKind::InterfaceMismatch,
                                "stage " + std::to_string(i) + " `" + a.name + "` produces " + describe(a.outputs) +
                                    " but stage " + std::to_string(i + 1) + " `" + b.name + "` expects " +
                                    describe(b.inputs),
                                i + 1);
        }
    }
}

FunctionalResult run_functional(const PipelineSpec& stages, const FaultScenario& faults, const visc::ValueMap& input,
                                std::uint64_t max_cycles) {
    check_interfaces(stages, &input);
    faults.validate(stages.size());

    FunctionalResult res;
    visc::ValueMap carry = input;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const visc::CycleIR& ir = stage_ir(stages, i);
        StageTrace t;
        t.stage = i;
        if (auto it = faults.faults.find(i); it != faults.faults.end()) {
            t.executed_on = it->second == Fallback::Software ? ExecutedOn::Software : ExecutedOn::Fpga;
        }
        try {
            visc::RunResult r = visc::run_until_valid(ir, carry, max_cycles);
            t.cycles_to_valid = r.cycles;
            t.outputs = r.outputs;
            carry = std::move(r.outputs);
        } catch (const visc::RuntimeError& e) {
            if (e.kind() != visc::RuntimeErrorKind::NeverValid) throw;
            throw PipelineError(ErrorKind::NeverValid, "stage " + std::to_string(i) + ": " + e.what(), i);
        }
        res.trace.push_back(std::move(t));
    }
    res.outputs = std::move(carry);
    return res;
}

}  // namespace oobleck::pipeline
