#include "scenario_file.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

namespace cerg::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

struct Entry {
    int line = 0;
    std::string value;
    bool used = false;
};

struct Section {
    int line = 0;
    std::map<std::string, Entry> entries;
    bool known = false;
};

class Document {
  public:
    Document(std::string path) : path_(std::move(path)) {}

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ScenarioParseError(path_, line, msg);
    }

    void parse() {
        std::ifstream in(path_);
        if (!in) fail(0, "cannot open scenario file");
        std::string raw;
        int lineno = 0;
        Section* cur = nullptr;
        while (std::getline(in, raw)) {
            ++lineno;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string line = trim(raw);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(lineno, "unterminated section header");
                const std::string name = trim(line.substr(1, line.size() - 2));
                if (name.empty()) fail(lineno, "empty section name");
                Section& sec = sections_[name];
                if (sec.line == 0) sec.line = lineno;
                cur = &sec;
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
            if (cur == nullptr) fail(lineno, "key outside of any [section]");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty()) fail(lineno, "empty key");
            auto [it, fresh] = cur->entries.emplace(key, Entry{lineno, trim(line.substr(eq + 1))});
            if (!fresh) fail(lineno, "duplicate key '" + key + "'");
        }
    }

    Section* find(const std::string& name) {
        auto it = sections_.find(name);
        if (it == sections_.end()) return nullptr;
        it->second.known = true;
        return &it->second;
    }

    Section& require_section(const std::string& name) {
        Section* sec = find(name);
        if (sec == nullptr) fail(0, "missing required section [" + name + "]");
        return *sec;
    }

    const std::string* lookup(Section& sec, const std::string& key) {
        auto it = sec.entries.find(key);
        if (it == sec.entries.end()) return nullptr;
        it->second.used = true;
        return &it->second.value;
    }

    int line_of(const Section& sec, const std::string& key) const {
        auto it = sec.entries.find(key);
        return it == sec.entries.end() ? sec.line : it->second.line;
    }

    const std::string& require_key(Section& sec, const std::string& sec_name,
                                   const std::string& key) {
        const std::string* v = lookup(sec, key);
        if (v == nullptr)
            fail(sec.line, "[" + sec_name + "] is missing required key '" + key + "'");
        return *v;
    }

    // Every parsed entry must have been consumed by a typed getter.
    void reject_unknown() const {
        for (const auto& [name, sec] : sections_) {
            if (!sec.known) fail(sec.line, "unknown section [" + name + "]");
            for (const auto& [key, entry] : sec.entries) {
                if (!entry.used) fail(entry.line, "unknown key '" + key + "' in [" + name + "]");
            }
        }
    }

    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::map<std::string, Section> sections_;
};

double scalar_at(Document& doc, Section& sec, const std::string& key, const std::string& value) {
    try {
        return parse_scalar(value);
    } catch (const std::invalid_argument& e) {
        doc.fail(doc.line_of(sec, key), std::string(e.what()) + " for key '" + key + "'");
    }
}

Eigen::VectorXd vector_at(Document& doc, Section& sec, const std::string& key,
                          const std::string& value) {
    const std::vector<std::string> parts = split(value, ',');
    if (parts.empty()) doc.fail(doc.line_of(sec, key), "empty vector for key '" + key + "'");
    Eigen::VectorXd out(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = scalar_at(doc, sec, key, trim(parts[i]));
    }
    return out;
}

bool bool_at(Document& doc, Section& sec, const std::string& key, const std::string& value) {
    std::string v = value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    doc.fail(doc.line_of(sec, key), "expected a boolean for key '" + key + "', got '" + value + "'");
}

struct TypedSection {
    Document& doc;
    Section& sec;
    std::string name;

    const std::string* opt(const std::string& key) { return doc.lookup(sec, key); }
    const std::string& req(const std::string& key) { return doc.require_key(sec, name, key); }

    double scalar(const std::string& key) { return scalar_at(doc, sec, key, req(key)); }
    double scalar_or(const std::string& key, double d) {
        const std::string* v = opt(key);
        return v ? scalar_at(doc, sec, key, *v) : d;
    }
    Eigen::VectorXd vector(const std::string& key) { return vector_at(doc, sec, key, req(key)); }
    bool flag_or(const std::string& key, bool d) {
        const std::string* v = opt(key);
        return v ? bool_at(doc, sec, key, *v) : d;
    }
};

std::shared_ptr<const PlantModel> parse_plant(Document& doc) {
    TypedSection plant{doc, doc.require_section("plant"), "plant"};
    const std::string& type = plant.req("type");
    if (type == "double_integrator") {
        return std::make_shared<DoubleIntegrator>();
    }
    if (type == "rr_arm") {
        RrArmParams p;
        p.l1 = plant.scalar_or("l1", p.l1);
        p.l2 = plant.scalar_or("l2", p.l2);
        p.m1 = plant.scalar_or("m1", p.m1);
        p.m2 = plant.scalar_or("m2", p.m2);
        p.g0 = plant.scalar_or("gravity", p.g0);
        return std::make_shared<RrArm>(p);
    }
    doc.fail(doc.line_of(plant.sec, "type"),
             "unknown plant type '" + type + "' (expected double_integrator or rr_arm)");
}

void parse_gains(Document& doc, Eigen::Index n, ScenarioDoc& out) {
    TypedSection gains{doc, doc.require_section("gains"), "gains"};
    const std::string& mode = gains.req("mode");
    if (mode == "joint") {
        out.mode = ControlMode::Joint;
    } else if (mode == "task") {
        out.mode = ControlMode::Task;
    } else {
        doc.fail(doc.line_of(gains.sec, "mode"),
                 "unknown control mode '" + mode + "' (expected joint or task)");
    }

    const bool has_joint = gains.opt("joint_kp") != nullptr || gains.opt("joint_kd") != nullptr;
    const bool has_task = gains.opt("task_kp") != nullptr || gains.opt("task_kd") != nullptr;
    if (has_joint) {
        out.joint_gains = GainConfig::joint(n, gains.scalar("joint_kp"), gains.scalar("joint_kd"));
    }
    if (has_task) {
        out.task_gains = GainConfig::task(gains.scalar("task_kp"), gains.scalar("task_kd"));
    }
    const auto& active = out.mode == ControlMode::Joint ? out.joint_gains : out.task_gains;
    if (!active.has_value()) {
        doc.fail(gains.sec.line,
                 std::string("[gains] declares mode = ") + mode + " but carries no " + mode +
                     " gain pair");
    }
    out.scenario.gains = *active;
}

HardConstraint parse_hard_entry(Document& doc, Section& sec, int line, const std::string& text) {
    const std::vector<std::string> fields = split(text, ':');
    (void)sec;
    if (fields.size() != 3) {
        doc.fail(line, "hard constraint '" + trim(text) + "' must be kind:coeffs:bound");
    }
    const std::string kind = trim(fields[0]);
    HardSpace space;
    if (kind == "q") {
        space = HardSpace::Position;
    } else if (kind == "qd") {
        space = HardSpace::Velocity;
    } else if (kind == "u") {
        space = HardSpace::Input;
    } else {
        doc.fail(line, "hard constraint kind '" + kind + "' must be q, qd, or u");
    }
    const std::vector<std::string> parts = split(trim(fields[1]), ',');
    Eigen::VectorXd coeff(static_cast<Eigen::Index>(parts.size()));
    try {
        for (std::size_t i = 0; i < parts.size(); ++i) {
            coeff(static_cast<Eigen::Index>(i)) = parse_scalar(trim(parts[i]));
        }
        return HardConstraint(space, coeff, parse_scalar(trim(fields[2])), trim(text));
    } catch (const std::invalid_argument& e) {
        doc.fail(line, std::string(e.what()) + " in hard constraint '" + trim(text) + "'");
    }
}

void parse_constraints(Document& doc, ScenarioDoc& out) {
    TypedSection cons{doc, doc.require_section("constraints"), "constraints"};
    const std::string& space = cons.req("soft_space");
    SoftSpace soft_space;
    if (space == "joint") {
        soft_space = SoftSpace::Joint;
    } else if (space == "task") {
        soft_space = SoftSpace::Task;
    } else {
        doc.fail(doc.line_of(cons.sec, "soft_space"),
                 "soft_space '" + space + "' must be joint or task");
    }
    out.scenario.constraints.soft =
        SoftConstraint(soft_space, cons.vector("soft_normal"), cons.scalar("soft_offset"));
    out.scenario.constraints.e_max = cons.scalar("e_max");

    if (const std::string* hard = cons.opt("hard")) {
        const int line = doc.line_of(cons.sec, "hard");
        for (const std::string& item : split(*hard, ';')) {
            if (trim(item).empty()) continue;
            out.scenario.constraints.hard.push_back(parse_hard_entry(doc, cons.sec, line, item));
        }
    }
}

}  // namespace

double parse_scalar(const std::string& token) {
    const std::string t = trim(token);
    if (t.empty()) throw std::invalid_argument("empty numeric value");

    std::size_t pos = 0;
    double sign = 1.0;
    if (t[pos] == '+' || t[pos] == '-') {
        sign = t[pos] == '-' ? -1.0 : 1.0;
        ++pos;
    }
    if (t.compare(pos, 2, "pi") == 0) {
        std::size_t rest = pos + 2;
        double value = M_PI;
        if (rest < t.size()) {
            const char op = t[rest];
            if (op != '/' && op != '*') {
                throw std::invalid_argument("malformed pi expression '" + t + "'");
            }
            const std::string num = trim(t.substr(rest + 1));
            char* end = nullptr;
            const double factor = std::strtod(num.c_str(), &end);
            if (num.empty() || end != num.c_str() + num.size()) {
                throw std::invalid_argument("malformed pi expression '" + t + "'");
            }
            if (op == '/') {
                if (factor == 0.0) throw std::invalid_argument("division by zero in '" + t + "'");
                value = M_PI / factor;
            } else {
                value = M_PI * factor;
            }
        }
        return sign * value;
    }

    const std::string body = t.substr(pos);
    char* end = nullptr;
    const double value = std::strtod(body.c_str(), &end);
    if (body.empty() || end != body.c_str() + body.size()) {
        throw std::invalid_argument("malformed number '" + t + "'");
    }
    return sign * value;
}

Scenario ScenarioDoc::with_mode(ControlMode m) const {
    const auto& gains = m == ControlMode::Joint ? joint_gains : task_gains;
    if (!gains.has_value()) {
        throw std::invalid_argument(std::string("scenario file carries no ") +
                                    (m == ControlMode::Joint ? "joint" : "task") + " gain pair");
    }
    Scenario sc = scenario;
    sc.gains = *gains;
    return sc;
}

ScenarioDoc load_scenario_file(const std::string& path) {
    Document doc(path);
    doc.parse();

    ScenarioDoc out;
    out.scenario.plant = parse_plant(doc);
    const Eigen::Index n = out.scenario.plant->dof();
    parse_gains(doc, n, out);
    parse_constraints(doc, out);

    TypedSection contact{doc, doc.require_section("contact"), "contact"};
    out.scenario.contact.stiffness = contact.scalar("k");
    out.scenario.contact.damping = contact.scalar("b");

    TypedSection gov{doc, doc.require_section("governor"), "governor"};
    GovernorParams& gp = out.scenario.governor;
    out.scenario.governor_enabled = gov.flag_or("enabled", true);
    gp.delta_s = gov.scalar("delta_s");
    gp.eta = gov.scalar_or("eta", gp.eta);
    gp.zeta = gov.scalar_or("zeta", gp.zeta);
    gp.delta_h = gov.scalar_or("delta_h", gp.delta_h);
    gp.kappa_h = gov.scalar_or("kappa_h", gp.kappa_h);
    gp.kappa_s = gov.scalar_or("kappa_s", gp.kappa_s);
    gp.kappa_e = gov.scalar_or("kappa_e", gp.kappa_e);
    gp.t_pred = gov.scalar_or("t_pred", gp.t_pred);
    gp.dt_pred = gov.scalar_or("dt_pred", gp.dt_pred);
    gp.dt_gov = gov.scalar_or("dt_gov", gp.dt_gov);
    gp.delta_max = gov.scalar_or("delta_max", gp.delta_max);
    gp.settle_eps_q = gov.scalar_or("settle_eps_q", gp.settle_eps_q);
    gp.settle_eps_v = gov.scalar_or("settle_eps_v", gp.settle_eps_v);

    TypedSection sim{doc, doc.require_section("sim"), "sim"};
    const Eigen::VectorXd q0 = sim.vector("x0_q");
    Eigen::VectorXd qd0 = Eigen::VectorXd::Zero(q0.size());
    if (sim.opt("x0_qd") != nullptr) qd0 = sim.vector("x0_qd");
    if (q0.size() != qd0.size()) {
        doc.fail(doc.line_of(sim.sec, "x0_qd"), "x0_q and x0_qd must have equal lengths");
    }
    out.scenario.x0 = State(q0, qd0);
    out.scenario.reference = sim.vector("reference");
    out.scenario.duration = sim.scalar("duration");
    out.scenario.dt_sim = sim.scalar("dt");

    out.stem = std::filesystem::path(path).stem().string();
    if (Section* output = doc.find("output")) {
        TypedSection os{doc, *output, "output"};
        if (const std::string* stem = os.opt("stem")) out.stem = *stem;
        if (const std::string* dir = os.opt("dir")) out.out_dir = *dir;
        out.plots = os.flag_or("plots", false);
    }

    doc.reject_unknown();
    out.scenario.validate();
    return out;
}

}  // namespace cerg::cli
