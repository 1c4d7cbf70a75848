#include "cive/network_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cive {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok)
            throw ParseError("unknown key \"" + it.key() + "\" in " + where);
    }
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError("missing key \"" + std::string(key) + "\" in " + where);
    return *it;
}

VarId lookup(const Network& net, const json& name, const std::string& where) {
    if (!name.is_string())
        throw ParseError(where + ": variable reference must be a name string");
    VarId v = net.find(name.get<std::string>());
    if (v == kNoVar)
        throw ParseError(where + ": unknown variable \"" + name.get<std::string>() + "\"");
    return v;
}

std::vector<double> number_array(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw ParseError(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& x : arr) {
        if (!x.is_number()) throw ParseError(where + ": expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

TableCPD parse_table_cpd(const Network& net, const json& obj) {
    reject_unknown_keys(obj, {"kind", "child", "parents", "probs"}, "table cpd");
    TableCPD t;
    t.child = lookup(net, require(obj, "child", "table cpd"), "table cpd");
    const std::string where = "table cpd of \"" + net.variable(t.child).name + "\"";
    const json& parents = require(obj, "parents", where);
    if (!parents.is_array()) throw ParseError(where + ": \"parents\" must be an array");
    for (const auto& p : parents) t.parents.push_back(lookup(net, p, where));
    t.probs = number_array(require(obj, "probs", where), where + " \"probs\"");
    return t;
}

CausalCPD parse_causal_cpd(const Network& net, const json& obj) {
    reject_unknown_keys(obj, {"kind", "child", "op", "custom_table", "leak", "contributions"},
                        "causal cpd");
    CausalCPD c;
    c.child = lookup(net, require(obj, "child", "causal cpd"), "causal cpd");
    const std::string where = "causal cpd of \"" + net.variable(c.child).name + "\"";

    const json& opname = require(obj, "op", where);
    if (!opname.is_string()) throw ParseError(where + ": \"op\" must be a string");
    auto op = BaseCombinationOp::from_name(opname.get<std::string>());
    if (!op)
        throw ParseError(where + ": unknown op \"" + opname.get<std::string>() +
                         "\" (expected or|and|max|sum|custom)");
    if (op->kind() == BaseCombinationOp::Kind::custom) {
        const json& table = require(obj, "custom_table", where);
        if (!table.is_array()) throw ParseError(where + ": \"custom_table\" must be an array");
        std::vector<std::vector<int>> rows;
        for (const auto& r : table) {
            if (!r.is_array()) throw ParseError(where + ": \"custom_table\" rows must be arrays");
            std::vector<int> row;
            for (const auto& x : r) {
                if (!x.is_number_integer())
                    throw ParseError(where + ": \"custom_table\" entries must be integers");
                row.push_back(x.get<int>());
            }
            rows.push_back(std::move(row));
        }
        c.op = BaseCombinationOp::custom(std::move(rows));
    } else {
        if (obj.contains("custom_table"))
            throw ParseError(where + ": \"custom_table\" is only valid with op \"custom\"");
        c.op = *op;
    }

    if (obj.contains("leak")) c.leak = number_array(obj["leak"], where + " \"leak\"");

    const json& contribs = require(obj, "contributions", where);
    if (!contribs.is_array())
        throw ParseError(where + ": \"contributions\" must be an array");
    for (const auto& entry : contribs) {
        if (!entry.is_object())
            throw ParseError(where + ": contributions must be objects");
        reject_unknown_keys(entry, {"parent", "table"}, where + " contribution");
        Contribution contrib;
        contrib.parent = lookup(net, require(entry, "parent", where), where);
        const json& table = require(entry, "table", where);
        if (!table.is_array())
            throw ParseError(where + ": contribution \"table\" must be an array of rows");
        for (const auto& r : table)
            contrib.table.push_back(number_array(r, where + " contribution row"));
        c.contributions.push_back(std::move(contrib));
    }
    return c;
}

}  // namespace

Network parse_network(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid network file: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("network file must be a JSON object");
    reject_unknown_keys(doc, {"variables", "cpds"}, "network");

    Network net;
    const json& vars = require(doc, "variables", "network");
    if (!vars.is_array()) throw ParseError("\"variables\" must be an array");
    for (const auto& v : vars) {
        if (!v.is_object()) throw ParseError("variable entries must be objects");
        reject_unknown_keys(v, {"name", "cardinality"}, "variable");
        const json& name = require(v, "name", "variable");
        const json& card = require(v, "cardinality", "variable");
        if (!name.is_string()) throw ParseError("variable \"name\" must be a string");
        if (!card.is_number_integer())
            throw ParseError("variable \"cardinality\" must be an integer");
        if (net.find(name.get<std::string>()) != kNoVar)
            throw ParseError("duplicate variable \"" + name.get<std::string>() + "\"");
        net.add_variable(name.get<std::string>(), card.get<int>());
    }

    const json& cpds = require(doc, "cpds", "network");
    if (!cpds.is_array()) throw ParseError("\"cpds\" must be an array");
    for (const auto& entry : cpds) {
        if (!entry.is_object()) throw ParseError("cpd entries must be objects");
        const json& kind = require(entry, "kind", "cpd");
        if (!kind.is_string())
            throw ParseError("cpd \"kind\" must be \"table\" or \"causal\"");
        CPD cpd;
        if (kind.get<std::string>() == "table") {
            cpd = parse_table_cpd(net, entry);
        } else if (kind.get<std::string>() == "causal") {
            cpd = parse_causal_cpd(net, entry);
        } else {
            throw ParseError("cpd \"kind\" must be \"table\" or \"causal\", got \"" +
                             kind.get<std::string>() + "\"");
        }
        VarId child = std::visit([](const auto& c) { return c.child; }, cpd);
        if (net.has_cpd(child))
            throw ParseError("duplicate cpd for variable \"" + net.variable(child).name +
                             "\"");
        net.set_cpd(std::move(cpd));
    }
    return net;
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open network file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

std::string serialize_network(const Network& net) {
    json doc;
    doc["variables"] = json::array();
    for (const auto& v : net.variables()) {
        if (v.kind == VarKind::deputy)
            throw UsageError("deputy variables are internal and cannot be serialized");
        doc["variables"].push_back({{"name", v.name}, {"cardinality", v.cardinality}});
    }
    doc["cpds"] = json::array();
    for (const auto& v : net.variables()) {
        if (!net.has_cpd(v.id)) continue;
        const CPD& c = net.cpd(v.id);
        json entry;
        if (const auto* t = std::get_if<TableCPD>(&c)) {
            entry["kind"] = "table";
            entry["child"] = v.name;
            entry["parents"] = json::array();
            for (VarId p : t->parents) entry["parents"].push_back(net.variable(p).name);
            entry["probs"] = t->probs;
        } else {
            const auto& causal = std::get<CausalCPD>(c);
            entry["kind"] = "causal";
            entry["child"] = v.name;
            entry["op"] = causal.op.name();
            if (causal.op.kind() == BaseCombinationOp::Kind::custom)
                entry["custom_table"] = causal.op.custom_table();
            if (causal.leak) entry["leak"] = *causal.leak;
            entry["contributions"] = json::array();
            for (const auto& contrib : causal.contributions) {
                entry["contributions"].push_back(
                    {{"parent", net.variable(contrib.parent).name},
                     {"table", contrib.table}});
            }
        }
        doc["cpds"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write network file: " + path);
    out << serialize_network(net);
}

}  // namespace cive
