#include "fairmatch/instance.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace fairmatch {

namespace {

using nlohmann::json;

ValueMatrix matrix_from_json(const json& rows, const MarketShape& shape) {
    if (!rows.is_array()) throw ParseError("\"values\" matrix must be an array of rows");
    ValueMatrix table;
    table.reserve(rows.size());
    for (const auto& row : rows) {
        if (!row.is_array()) throw ParseError("value rows must be arrays");
        std::vector<Rat> out;
        out.reserve(row.size());
        for (const auto& cell : row) {
            if (!cell.is_string()) throw ParseError("values must be \"p/q\" strings");
            out.push_back(Rat::parse(cell.get<std::string>()));
        }
        table.push_back(std::move(out));
    }
    validate_value_matrix(shape, table);
    return table;
}

json matrix_to_json(const ValueMatrix& table) {
    json rows = json::array();
    for (const auto& row : table) {
        json cells = json::array();
        for (const Rat& v : row) cells.push_back(v.str());
        rows.push_back(std::move(cells));
    }
    return rows;
}

Capabilities caps_from_json(const json& doc, bool is_static, const std::optional<Rat>& a) {
    Capabilities caps;
    caps.is_static = is_static;
    caps.a = a;
    if (doc.contains("capabilities")) {
        for (const auto& c : doc.at("capabilities")) {
            const std::string name = c.get<std::string>();
            if (name == "symmetric")
                caps.symmetric = true;
            else if (name == "binary")
                caps.binary = true;
            else if (name == "binary01")
                caps.binary01 = true;
            else
                throw ParseError("unknown capability \"" + name + "\"");
        }
    }
    if (caps.binary && !caps.a)
        throw ParseError("binary capability requires a non-null \"a\"");
    if (caps.binary01) {
        caps.binary = true;
        if (!caps.a) caps.a = Rat(0);
        if (!caps.a->is_zero()) throw ParseError("binary01 requires a = 0/1");
    }
    return caps;
}

}  // namespace

Instance Instance::from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("instance document must be a JSON object");
    if (doc.value("format", 0) != 1) throw ParseError("unsupported instance format version");

    Instance inst;
    inst.shape.n = doc.at("n").get<int>();
    inst.shape.m = doc.at("m").get<int>();
    if (inst.shape.n < 1 || inst.shape.m < 1)
        throw ParseError("instance sides must be non-empty");

    if (doc.contains("a") && !doc.at("a").is_null())
        inst.a = Rat::parse(doc.at("a").get<std::string>());
    if (inst.a && (inst.a->sign() < 0 || *inst.a >= Rat(1)))
        throw ParseError("a must lie in [0, 1)");

    const std::string mode = doc.at("mode").get<std::string>();
    if (mode == "static") {
        Capabilities caps = caps_from_json(doc, true, inst.a);
        inst.valuation = std::make_shared<TableValuation>(
            inst.shape, matrix_from_json(doc.at("values"), inst.shape), std::move(caps));
    } else if (mode == "scripted") {
        Capabilities caps = caps_from_json(doc, false, inst.a);
        const auto& script_json = doc.at("values");
        if (!script_json.is_array() || script_json.empty())
            throw ParseError("scripted \"values\" must be a non-empty array of matrices");
        std::vector<ValueMatrix> script;
        script.reserve(script_json.size());
        for (const auto& m : script_json) script.push_back(matrix_from_json(m, inst.shape));
        inst.valuation = std::make_shared<ScriptedValuation>(inst.shape, std::move(script),
                                                             std::move(caps));
    } else {
        throw ParseError("mode must be \"static\" or \"scripted\"");
    }
    return inst;
}

Instance Instance::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("invalid instance JSON in " + path.string() + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json Instance::to_json() const {
    json doc;
    doc["format"] = 1;
    doc["n"] = shape.n;
    doc["m"] = shape.m;
    doc["a"] = a ? json(a->str()) : json(nullptr);

    const Capabilities& caps = capabilities();
    json cap_names = json::array();
    if (caps.symmetric) cap_names.push_back("symmetric");
    if (caps.binary) cap_names.push_back("binary");
    if (caps.binary01) cap_names.push_back("binary01");
    doc["capabilities"] = std::move(cap_names);

    if (const auto* table = dynamic_cast<const TableValuation*>(valuation.get())) {
        doc["mode"] = "static";
        doc["values"] = matrix_to_json(table->table());
    } else if (const auto* script = dynamic_cast<const ScriptedValuation*>(valuation.get())) {
        doc["mode"] = "scripted";
        json matrices = json::array();
        for (int t = 1; t <= script->script_length(); ++t)
            matrices.push_back(matrix_to_json(script->matrix_at(t)));
        doc["values"] = std::move(matrices);
    } else {
        throw UsageError("only table/script backed instances serialize directly");
    }
    return doc;
}

void Instance::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write instance file: " + path.string());
    out << to_json().dump(1) << "\n";
}

}  // namespace fairmatch
