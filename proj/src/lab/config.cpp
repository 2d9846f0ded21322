#include "maxlab/errors.hpp"
#include "maxlab/lab.hpp"
#include "maxlab/multid.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace maxlab::lab {

namespace {

using shear1d::BoundaryKind;
using shear1d::Side;

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
    throw ConfigError("config field '" + field + "': " + message);
}

template <typename T>
T scalar_as(const YAML::Node& node, const std::string& field, const char* type_name) {
    if (!node.IsScalar()) field_error(field, std::string("expected ") + type_name);
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        field_error(field, std::string("expected ") + type_name + ", got '" + node.Scalar() + "'");
    }
}

double as_double(const YAML::Node& n, const std::string& f) { return scalar_as<double>(n, f, "a number"); }
int as_int(const YAML::Node& n, const std::string& f) { return scalar_as<int>(n, f, "an integer"); }
std::string as_string(const YAML::Node& n, const std::string& f) { return scalar_as<std::string>(n, f, "a string"); }

std::vector<double> as_double_list(const YAML::Node& n, const std::string& f) {
    if (!n.IsSequence()) field_error(f, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < n.size(); ++k) out.push_back(as_double(n[k], f + "[" + std::to_string(k) + "]"));
    return out;
}

std::vector<int> as_int_list(const YAML::Node& n, const std::string& f) {
    if (!n.IsSequence()) field_error(f, "expected a list of integers");
    std::vector<int> out;
    for (std::size_t k = 0; k < n.size(); ++k) out.push_back(as_int(n[k], f + "[" + std::to_string(k) + "]"));
    return out;
}

std::string_view kind_name(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::periodic: return "periodic";
        case BoundaryKind::dissipative: return "dissipative";
        case BoundaryKind::dirichlet_velocity: return "dirichlet-velocity";
    }
    return "unknown";
}

BoundaryConfig parse_boundary(const YAML::Node& n, const std::string& field) {
    if (!n.IsMap()) field_error(field, "expected a mapping with 'kind'");
    static const std::set<std::string> allowed{"kind", "c_u", "c_tau", "g"};
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) field_error(field + "." + key, "unknown key");
    }
    if (!n["kind"]) field_error(field + ".kind", "missing");
    BoundaryConfig b;
    const std::string kind = as_string(n["kind"], field + ".kind");
    if (kind == "periodic") {
        b.kind = BoundaryKind::periodic;
    } else if (kind == "dissipative") {
        b.kind = BoundaryKind::dissipative;
        if (!n["c_u"] || !n["c_tau"]) field_error(field, "dissipative boundary needs c_u and c_tau");
    } else if (kind == "dirichlet-velocity") {
        b.kind = BoundaryKind::dirichlet_velocity;
        if (n["c_u"] || n["c_tau"]) field_error(field, "dirichlet-velocity boundary takes only g");
        b.c_u = 1.0;
    } else {
        field_error(field + ".kind", "expected periodic, dissipative or dirichlet-velocity, got '" + kind + "'");
    }
    if (n["c_u"]) b.c_u = as_double(n["c_u"], field + ".c_u");
    if (n["c_tau"]) b.c_tau = as_double(n["c_tau"], field + ".c_tau");
    if (n["g"]) b.g = as_double(n["g"], field + ".g");
    if (b.kind == BoundaryKind::periodic && (n["c_u"] || n["c_tau"] || n["g"]))
        field_error(field, "periodic boundary takes no coefficients");
    return b;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void emit_boundary(YAML::Emitter& out, const BoundaryConfig& b) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(kind_name(b.kind));
    if (b.kind == BoundaryKind::dissipative) {
        out << YAML::Key << "c_u" << YAML::Value << b.c_u;
        out << YAML::Key << "c_tau" << YAML::Value << b.c_tau;
    }
    if (b.kind != BoundaryKind::periodic) out << YAML::Key << "g" << YAML::Value << b.g;
    out << YAML::EndMap;
}

}  // namespace

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::shear_xi_sweep: return "shear-xi-sweep";
        case Scenario::shear_stokes: return "shear-stokes";
        case Scenario::shear_energy_audit: return "shear-energy-audit";
        case Scenario::multid_xi_sweep: return "multid-xi-sweep";
        case Scenario::multid_audits: return "multid-audits";
    }
    return "unknown";
}

Scenario scenario_from_string(std::string_view name) {
    for (Scenario s : {Scenario::shear_xi_sweep, Scenario::shear_stokes, Scenario::shear_energy_audit,
                       Scenario::multid_xi_sweep, Scenario::multid_audits})
        if (to_string(s) == name) return s;
    throw ConfigError("config field 'scenario': unknown scenario '" + std::string(name) + "'");
}

bool is_multid(Scenario s) { return s == Scenario::multid_xi_sweep || s == Scenario::multid_audits; }

shear1d::BoundarySpec BoundaryConfig::spec(Side side) const {
    const double value = g;
    shear1d::BoundaryData data;
    if (value != 0.0) data = [value](double) { return value; };
    switch (kind) {
        case BoundaryKind::periodic: return shear1d::BoundarySpec::periodic(side);
        case BoundaryKind::dirichlet_velocity: return shear1d::BoundarySpec::dirichlet_velocity(side, data);
        case BoundaryKind::dissipative: return shear1d::BoundarySpec::dissipative(side, c_u, c_tau, data);
    }
    return shear1d::BoundarySpec::periodic(side);
}

void ScenarioConfig::validate() const {
    if (!(std::isfinite(G) && G > 0.0)) field_error("G", "must be a finite number > 0");
    if (!(std::isfinite(c0) && c0 > 0.0)) field_error("c0", "must be a finite number > 0");
    if (!(std::isfinite(T) && T > 0.0)) field_error("T", "must be a finite number > 0");
    if (xi_list.empty()) field_error("xi_list", "must not be empty");
    for (std::size_t k = 0; k < xi_list.size(); ++k) {
        if (!(std::isfinite(xi_list[k]) && xi_list[k] >= 0.0)) field_error("xi_list", "entries must be finite and >= 0");
        if (k > 0 && !(xi_list[k] < xi_list[k - 1])) field_error("xi_list", "must be strictly decreasing");
    }
    if ((scenario == Scenario::shear_xi_sweep || scenario == Scenario::multid_xi_sweep) && xi_list.size() < 2)
        field_error("xi_list", "a sweep needs at least one xi_1 and the reference xi_2");
    if (output_count < 1) field_error("output_count", "must be >= 1");
    if (threads < 0) field_error("threads", "must be >= 0");
    if (output_dir.empty()) field_error("output_dir", "must not be empty");
    if (!power_of_two(nx)) field_error("grid", "sizes must be powers of two");
    if (!std::isfinite(amplitude)) field_error("amplitude", "must be finite");

    if (is_2d()) {
        if (!power_of_two(ny)) field_error("grid", "2D scenarios need [nx, ny], powers of two");
        if (nx < 4 || ny < 4) field_error("grid", "2D grids need at least 4 cells per direction");
        multid::initial_data_from_string(initial_data);
        if (!refinement.empty() && scenario != Scenario::multid_audits)
            field_error("refinement", "only used by multid-audits");
        for (int n : refinement)
            if (!power_of_two(n) || n < 4) field_error("refinement", "sizes must be powers of two >= 4");
        return;
    }

    if (ny != 0) field_error("grid", "1D scenarios take a single cell count");
    if (!refinement.empty()) field_error("refinement", "only used by multid-audits");
    if (!(std::isfinite(y_min) && std::isfinite(y_max) && y_max > y_min)) field_error("domain", "needs y_min < y_max");
    if (!(cfl > 0.0 && cfl <= 1.0)) field_error("cfl", "must lie in (0, 1]");
    if (initial_data != "sine" && initial_data != "rest")
        field_error("initial_data", "1D scenarios take 'sine' or 'rest', got '" + initial_data + "'");
    if (wavenumber < 1) field_error("wavenumber", "must be >= 1");
    try {
        shear1d::validate_boundaries(bc_left.spec(Side::left), bc_right.spec(Side::right), G);
    } catch (const ConfigError& e) {
        field_error("bc_left/bc_right", e.what());
    }
    if (scenario == Scenario::shear_stokes) {
        if (bc_left.kind != BoundaryKind::dirichlet_velocity)
            field_error("bc_left", "shear-stokes needs a dirichlet-velocity left boundary");
        if (initial_data != "rest") field_error("initial_data", "shear-stokes starts from rest");
    }
}

ScenarioConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config is not valid YAML: ") + e.what());
    }
    if (!root.IsMap()) throw ConfigError("config must be a mapping of key: value pairs");

    static const std::set<std::string> allowed{
        "scenario", "grid",       "domain",     "T",          "G",          "c0",         "xi_list",
        "cfl",      "initial_data", "amplitude", "wavenumber", "bc_left",   "bc_right",   "output_count",
        "refinement", "output_dir", "seed",      "threads"};
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) field_error(key, "unknown key");
    }
    if (!root["scenario"]) field_error("scenario", "missing");

    ScenarioConfig c;
    c.scenario = scenario_from_string(as_string(root["scenario"], "scenario"));
    if (c.is_2d()) {
        c.nx = 64;
        c.ny = 64;
        c.T = 0.1;
        c.initial_data = "deformation-map";
        c.amplitude = 0.1;
        c.output_count = 10;
    }
    if (c.scenario == Scenario::shear_stokes) c.initial_data = "rest";

    if (const auto n = root["grid"]) {
        if (n.IsSequence()) {
            const auto g = as_int_list(n, "grid");
            if (g.size() != 2) field_error("grid", "expected N or [nx, ny]");
            c.nx = g[0];
            c.ny = g[1];
        } else {
            c.nx = as_int(n, "grid");
            c.ny = c.is_2d() ? c.nx : 0;
        }
    }
    if (const auto n = root["domain"]) {
        if (c.is_2d()) field_error("domain", "2D scenarios run on the unit periodic box");
        const auto d = as_double_list(n, "domain");
        if (d.size() != 2) field_error("domain", "expected [y_min, y_max]");
        c.y_min = d[0];
        c.y_max = d[1];
    }
    if (const auto n = root["T"]) c.T = as_double(n, "T");
    if (const auto n = root["G"]) c.G = as_double(n, "G");
    if (const auto n = root["c0"]) c.c0 = as_double(n, "c0");
    if (const auto n = root["xi_list"]) c.xi_list = as_double_list(n, "xi_list");
    if (const auto n = root["cfl"]) {
        if (c.is_2d()) field_error("cfl", "2D runs use the fixed safety factor 0.45");
        c.cfl = as_double(n, "cfl");
    }
    if (const auto n = root["initial_data"]) c.initial_data = as_string(n, "initial_data");
    if (const auto n = root["amplitude"]) c.amplitude = as_double(n, "amplitude");
    if (const auto n = root["wavenumber"]) c.wavenumber = as_int(n, "wavenumber");
    if (const auto n = root["bc_left"]) {
        if (c.is_2d()) field_error("bc_left", "2D scenarios are periodic");
        c.bc_left = parse_boundary(n, "bc_left");
    }
    if (const auto n = root["bc_right"]) {
        if (c.is_2d()) field_error("bc_right", "2D scenarios are periodic");
        c.bc_right = parse_boundary(n, "bc_right");
    }
    if (const auto n = root["output_count"]) c.output_count = as_int(n, "output_count");
    if (const auto n = root["refinement"]) c.refinement = as_int_list(n, "refinement");
    if (const auto n = root["output_dir"]) c.output_dir = as_string(n, "output_dir");
    if (const auto n = root["seed"]) c.seed = scalar_as<std::uint64_t>(n, "seed", "a non-negative integer");
    if (const auto n = root["threads"]) c.threads = as_int(n, "threads");

    c.validate();
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

std::string echo_config(const ScenarioConfig& c) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "scenario" << YAML::Value << std::string(to_string(c.scenario));
    if (c.is_2d()) {
        out << YAML::Key << "grid" << YAML::Value << YAML::Flow << std::vector<int>{c.nx, c.ny};
    } else {
        out << YAML::Key << "grid" << YAML::Value << c.nx;
        out << YAML::Key << "domain" << YAML::Value << YAML::Flow << std::vector<double>{c.y_min, c.y_max};
    }
    out << YAML::Key << "T" << YAML::Value << c.T;
    out << YAML::Key << "G" << YAML::Value << c.G;
    out << YAML::Key << "c0" << YAML::Value << c.c0;
    out << YAML::Key << "xi_list" << YAML::Value << YAML::Flow << c.xi_list;
    if (!c.is_2d()) out << YAML::Key << "cfl" << YAML::Value << c.cfl;
    out << YAML::Key << "initial_data" << YAML::Value << c.initial_data;
    out << YAML::Key << "amplitude" << YAML::Value << c.amplitude;
    if (!c.is_2d()) {
        out << YAML::Key << "wavenumber" << YAML::Value << c.wavenumber;
        out << YAML::Key << "bc_left" << YAML::Value;
        emit_boundary(out, c.bc_left);
        out << YAML::Key << "bc_right" << YAML::Value;
        emit_boundary(out, c.bc_right);
    }
    out << YAML::Key << "output_count" << YAML::Value << c.output_count;
    if (c.scenario == Scenario::multid_audits)
        out << YAML::Key << "refinement" << YAML::Value << YAML::Flow << c.refinement;
    out << YAML::Key << "output_dir" << YAML::Value << c.output_dir;
    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::Key << "threads" << YAML::Value << c.threads;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace maxlab::lab
