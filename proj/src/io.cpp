#include "grl/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace grl {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("malformed file: " + what); }

void expect_schema(const Json& j, std::string_view schema) {
    if (!j.is_object() || !j.contains("schema") || j["schema"] != schema) {
        bad("expected schema " + std::string(schema));
    }
}

Json angle_to_json(const Angle& a) {
    Json j = Json::object();
    if (a.is_bound()) {
        j["value"] = a.value();
    } else {
        j["symbol"] = a.symbol();
    }
    return j;
}

Angle angle_from_json(const Json& j) {
    if (j.contains("value")) return Angle::value(j.at("value").get<double>());
    if (j.contains("symbol")) return Angle::symbol(j.at("symbol").get<int>());
    bad("angle needs \"value\" or \"symbol\"");
}

GateKind kind_from_json(const Json& j) {
    const auto kind = parse_kind(j.get<std::string>());
    if (!kind) bad("unknown gate kind " + j.dump());
    return *kind;
}

Json gadget_to_json(const GadgetDef& g) {
    Json body = Json::array();
    for (const TemplateGate& t : g.body) {
        Json tj{{"kind", kind_name(t.kind)}};
        tj["vars"] = kind_arity(t.kind) == 2 ? Json{t.vars[0], t.vars[1]} : Json{t.vars[0]};
        if (t.slot >= 0) tj["slot"] = t.slot;
        body.push_back(std::move(tj));
    }
    Fragment f{g.body, g.arity, g.angle_slots, 0.0, 0};
    return Json{{"name", g.name}, {"arity", g.arity}, {"angle_slots", g.angle_slots},
                {"program", f.program()}, {"body", std::move(body)}};
}

GadgetDef gadget_from_json(const Json& j) {
    GadgetDef g;
    g.name = j.at("name").get<std::string>();
    g.arity = j.at("arity").get<int>();
    g.angle_slots = j.at("angle_slots").get<int>();
    for (const Json& tj : j.at("body")) {
        TemplateGate t;
        t.kind = kind_from_json(tj.at("kind"));
        const Json& vars = tj.at("vars");
        if (static_cast<int>(vars.size()) != kind_arity(t.kind)) bad("template arity for " + tj.dump());
        for (std::size_t i = 0; i < vars.size(); ++i) t.vars[i] = vars[i].get<int>();
        t.slot = tj.value("slot", -1);
        g.body.push_back(t);
    }
    validate(g);
    return g;
}

}  // namespace

Json circuit_to_json(const Circuit& circuit) {
    Json instrs = Json::array();
    for (const GateInstruction& g : circuit.instructions) {
        Json gj{{"kind", kind_name(g.kind)}};
        Json qs = Json::array();
        for (int q : g.targets()) qs.push_back(q);
        gj["qubits"] = std::move(qs);
        if (g.kind == GateKind::Gadget) {
            gj["gadget"] = g.gadget;
            Json ps = Json::array();
            for (const Angle& a : g.params) ps.push_back(angle_to_json(a));
            gj["params"] = std::move(ps);
        } else if (!g.params.empty()) {
            gj["param"] = angle_to_json(g.params[0]);
        }
        instrs.push_back(std::move(gj));
    }
    return Json{{"schema", "grl.circuit/1"},
                {"num_qubits", circuit.num_qubits},
                {"parameters", circuit.parameters},
                {"instructions", std::move(instrs)}};
}

Circuit circuit_from_json(const Json& j) {
    expect_schema(j, "grl.circuit/1");
    try {
        Circuit c(j.at("num_qubits").get<int>());
        c.parameters = j.value("parameters", std::vector<std::string>{});
        for (const Json& gj : j.at("instructions")) {
            const GateKind kind = kind_from_json(gj.at("kind"));
            const auto qubits = gj.at("qubits").get<std::vector<int>>();
            if (kind == GateKind::Gadget) {
                std::vector<Angle> params;
                for (const Json& a : gj.value("params", Json::array())) params.push_back(angle_from_json(a));
                c.append(GateInstruction::gadget_call(gj.at("gadget").get<int>(), qubits, std::move(params)));
            } else {
                std::optional<Angle> angle;
                if (gj.contains("param")) angle = angle_from_json(gj["param"]);
                c.append(GateInstruction::elementary(kind, qubits, angle));
            }
        }
        validate(c);
        return c;
    } catch (const nlohmann::json::exception& e) {
        bad(e.what());
    }
}

Json library_to_json(const std::vector<LibraryEntry>& library) {
    Json gadgets = Json::array();
    for (const LibraryEntry& e : library) {
        Json gj = gadget_to_json(e.gadget);
        gj["provenance"] = {{"field", e.source_field}, {"score_delta", e.score_delta}};
        gadgets.push_back(std::move(gj));
    }
    return Json{{"schema", "grl.gadgets/1"}, {"gadgets", std::move(gadgets)}};
}

std::vector<LibraryEntry> library_from_json(const Json& j) {
    expect_schema(j, "grl.gadgets/1");
    try {
        std::vector<LibraryEntry> out;
        for (const Json& gj : j.at("gadgets")) {
            LibraryEntry e{gadget_from_json(gj), 0.0, 0.0};
            if (gj.contains("provenance")) {
                e.source_field = gj["provenance"].value("field", 0.0);
                e.score_delta = gj["provenance"].value("score_delta", 0.0);
            }
            out.push_back(std::move(e));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        bad(e.what());
    }
}

GadgetLibrary gadgets_of(const std::vector<LibraryEntry>& library) {
    GadgetLibrary out;
    for (const LibraryEntry& e : library) out.push_back(e.gadget);
    return out;
}

Json corpus_to_json(const std::vector<StoredCircuit>& corpus) {
    Json items = Json::array();
    for (const StoredCircuit& s : corpus) {
        items.push_back({{"energy", s.energy},
                         {"cost", s.cost},
                         {"field", s.field},
                         {"seed", s.seed},
                         {"circuit", circuit_to_json(s.circuit)}});
    }
    return Json{{"schema", "grl.corpus/1"}, {"circuits", std::move(items)}};
}

std::vector<StoredCircuit> corpus_from_json(const Json& j) {
    expect_schema(j, "grl.corpus/1");
    try {
        std::vector<StoredCircuit> out;
        for (const Json& item : j.at("circuits")) {
            out.push_back({circuit_from_json(item.at("circuit")), item.at("energy").get<double>(),
                           item.value("cost", 0.0), item.value("field", 0.0), item.value("seed", std::uint64_t{0})});
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        bad(e.what());
    }
}

Json mlp_to_json(const Mlp& net) {
    Json layers = Json::array();
    for (const DenseLayer& l : net.layers()) {
        layers.push_back({{"rows", l.weight.rows()},
                          {"cols", l.weight.cols()},
                          {"weight", std::vector<double>(l.weight.data(), l.weight.data() + l.weight.size())},
                          {"bias", std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size())}});
    }
    return Json{{"schema", "grl.mlp/1"}, {"layers", std::move(layers)}};
}

Mlp mlp_from_json(const Json& j) {
    expect_schema(j, "grl.mlp/1");
    Mlp net;
    try {
        Eigen::Index prev = -1;
        for (const Json& lj : j.at("layers")) {
            const auto rows = lj.at("rows").get<Eigen::Index>();
            const auto cols = lj.at("cols").get<Eigen::Index>();
            const auto w = lj.at("weight").get<std::vector<double>>();
            const auto b = lj.at("bias").get<std::vector<double>>();
            if (static_cast<Eigen::Index>(w.size()) != rows * cols || static_cast<Eigen::Index>(b.size()) != rows ||
                (prev >= 0 && cols != prev)) {
                bad("inconsistent layer shape");
            }
            prev = rows;
            DenseLayer l{Eigen::Map<const RowMatrix>(w.data(), rows, cols),
                         Eigen::Map<const Eigen::VectorXd>(b.data(), rows)};
            net.layers().push_back(std::move(l));
        }
    } catch (const nlohmann::json::exception& e) {
        bad(e.what());
    }
    return net;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Json read_json(const std::filesystem::path& path) {
    try {
        return Json::parse(read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
        bad(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace grl
