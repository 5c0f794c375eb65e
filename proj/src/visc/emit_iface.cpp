#include <json.hpp>

#include "oobleck/visc/emit.hpp"
#include "oobleck/visc/parser.hpp"

namespace oobleck::visc {
namespace {

using Json = nlohmann::ordered_json;

const char* kind_name(VType t) {
    switch (t.kind) {
        case VType::Kind::Int: return "int";
        case VType::Kind::Bool: return "bool";
        case VType::Kind::IntArray: return "int_array";
    }
    return "int";
}

Json field(const std::string& name, VType type) {
    Json f;
    f["name"] = name;
    f["kind"] = kind_name(type);
    f["width"] = type.bit_width();
    if (type.is_array()) f["length"] = type.length;
    return f;
}

Json literal_words(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::BoolLiteral: return e.bool_value;
        case Expr::Kind::ArrayLiteral: {
            Json arr = Json::array();
            for (const Expr& x : e.operands) arr.push_back(x.int_value);
            return arr;
        }
        default: return e.int_value;
    }
}

}  // namespace

std::string emit_interface_descriptor(const TypedModule& tm) {
    const ModuleAst& m = tm.ast;
    Json doc;
    doc["module"] = m.name;

    Json in = Json::array();
    for (const Param& p : m.inputs) in.push_back(field(p.name, p.type));
    doc["I_" + m.name] = std::move(in);

    Json out = Json::array();
    for (const Param& p : m.outputs) out.push_back(field(p.name, p.type));
    doc["O_" + m.name] = std::move(out);

    if (tm.is_sequential) {
        Json st = Json::array();
        for (const StateDecl& d : m.state_decls) {
            Json f = field(d.name, d.type);
            f["init"] = literal_words(d.init);
            st.push_back(std::move(f));
        }
        doc["State_" + m.name] = std::move(st);
    }

    doc["valid"] = print_expr(m.valid_expr);
    doc["ready"] = print_expr(m.ready_expr);
    doc["array_encoding"] = "flattened; element 0 occupies the least significant 64 bits";
    return doc.dump(2) + "\n";
}

}  // namespace oobleck::visc
