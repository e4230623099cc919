#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fracsica/scenario.hpp"

namespace fracsica::scenario {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return s.substr(a, b - a);
}

struct RawEntry {
    std::string value;
    int line;
};

using Section = std::map<std::string, RawEntry>;

double parse_double(const RawEntry& e, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size() || !std::isfinite(v)) {
            throw std::invalid_argument("");
        }
        return v;
    } catch (...) {
        throw ConfigError(e.line, key, "expected a number for '" + key + "', got '" + e.value +
                                           "' (line " + std::to_string(e.line) + ")");
    }
}

std::size_t parse_size(const RawEntry& e, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(e.value, &pos);
        if (pos != e.value.size() || v < 0) {
            throw std::invalid_argument("");
        }
        return static_cast<std::size_t>(v);
    } catch (...) {
        throw ConfigError(e.line, key, "expected a non-negative integer for '" + key +
                                           "', got '" + e.value + "' (line " +
                                           std::to_string(e.line) + ")");
    }
}

bool parse_bool(const RawEntry& e, const std::string& key) {
    if (e.value == "true") {
        return true;
    }
    if (e.value == "false") {
        return false;
    }
    throw ConfigError(e.line, key, "expected true/false for '" + key + "', got '" + e.value +
                                       "' (line " + std::to_string(e.line) + ")");
}

std::vector<double> parse_double_list(const RawEntry& e, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw ConfigError(e.line, key, "empty element in list '" + key + "' (line " +
                                               std::to_string(e.line) + ")");
        }
        out.push_back(parse_double({item, e.line}, key));
    }
    if (out.empty()) {
        throw ConfigError(e.line, key,
                          "list '" + key + "' is empty (line " + std::to_string(e.line) + ")");
    }
    return out;
}

// Consume-and-erase accessor so leftovers can be reported as unknown keys.
class SectionReader {
public:
    SectionReader(Section& section, std::string name) : section_(section), name_(std::move(name)) {}

    bool take(const std::string& key, RawEntry& out) {
        auto it = section_.find(key);
        if (it == section_.end()) {
            return false;
        }
        out = it->second;
        section_.erase(it);
        return true;
    }

    void take_double(const std::string& key, double& target) {
        RawEntry e;
        if (take(key, e)) {
            target = parse_double(e, key);
        }
    }

    void take_size(const std::string& key, std::size_t& target) {
        RawEntry e;
        if (take(key, e)) {
            target = parse_size(e, key);
        }
    }

    void take_bool(const std::string& key, bool& target) {
        RawEntry e;
        if (take(key, e)) {
            target = parse_bool(e, key);
        }
    }

    void take_string(const std::string& key, std::string& target) {
        RawEntry e;
        if (take(key, e)) {
            target = e.value;
        }
    }

    void reject_leftovers() const {
        if (!section_.empty()) {
            const auto& [key, entry] = *section_.begin();
            throw ConfigError(entry.line, key,
                              "unknown key '" + key + "' in section [" + name_ + "] (line " +
                                  std::to_string(entry.line) + ")");
        }
    }

private:
    Section& section_;
    std::string name_;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
    std::map<std::string, Section> sections;
    std::string line;
    std::string current;
    int line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') {
            continue;
        }
        if (text.front() == '[') {
            if (text.back() != ']') {
                throw ConfigError(line_no, "", "malformed section header (line " +
                                                   std::to_string(line_no) + ")");
            }
            current = trim(text.substr(1, text.size() - 2));
            if (current != "model" && current != "solver" && current != "focp" &&
                current != "output") {
                throw ConfigError(line_no, current, "unknown section [" + current + "] (line " +
                                                        std::to_string(line_no) + ")");
            }
            sections[current];
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line_no, "", "expected 'key = value' (line " +
                                               std::to_string(line_no) + ")");
        }
        if (current.empty()) {
            throw ConfigError(line_no, "", "entry before any [section] (line " +
                                               std::to_string(line_no) + ")");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(line_no, "", "empty key (line " + std::to_string(line_no) + ")");
        }
        auto [it, inserted] = sections[current].emplace(key, RawEntry{value, line_no});
        if (!inserted) {
            throw ConfigError(line_no, key,
                              "duplicate key '" + key + "' in section [" + current + "] (line " +
                                  std::to_string(line_no) + ")");
        }
    }

    ScenarioConfig config;

    {
        SectionReader model(sections["model"], "model");
        model.take_double("lambda", config.model.params.Lambda);
        model.take_double("mu", config.model.params.mu);
        model.take_double("phi", config.model.params.phi);
        model.take_double("rho", config.model.params.rho);
        model.take_double("sigma", config.model.params.sigma);
        model.take_double("omega", config.model.params.omega);
        model.take_double("d", config.model.params.d);

        RawEntry kind;
        if (model.take("incidence", kind)) {
            if (kind.value != "bilinear" && kind.value != "saturated" &&
                kind.value != "hattaf_yousfi") {
                throw ConfigError(kind.line, "incidence",
                                  "unknown incidence kind '" + kind.value + "' (line " +
                                      std::to_string(kind.line) + ")");
            }
            config.model.incidence.kind = kind.value;
        }
        model.take_double("beta", config.model.incidence.beta);
        model.take_double("saturation_a", config.model.incidence.saturation_a);
        model.take_double("hattaf_a0", config.model.incidence.hattaf_a0);
        model.take_double("hattaf_a1", config.model.incidence.hattaf_a1);
        model.take_double("hattaf_a2", config.model.incidence.hattaf_a2);

        RawEntry initial;
        if (model.take("initial", initial)) {
            if (initial.value == "morocco") {
                config.model.initial.morocco = true;
            } else if (initial.value == "explicit") {
                config.model.initial.morocco = false;
            } else {
                throw ConfigError(initial.line, "initial",
                                  "initial must be morocco or explicit (line " +
                                      std::to_string(initial.line) + ")");
            }
        }
        model.take_double("S0", config.model.initial.state.S);
        model.take_double("I0", config.model.initial.state.I);
        model.take_double("C0", config.model.initial.state.C);
        model.take_double("A0", config.model.initial.state.A);
        model.reject_leftovers();
    }

    {
        SectionReader solver(sections["solver"], "solver");
        RawEntry alphas;
        if (solver.take("alphas", alphas)) {
            config.solver.alphas = parse_double_list(alphas, "alphas");
            for (double a : config.solver.alphas) {
                if (!(a > 0.0) || a > 1.0) {
                    throw ConfigError(alphas.line, "alphas",
                                      "alpha values must lie in (0, 1] (line " +
                                          std::to_string(alphas.line) + ")");
                }
            }
        }
        solver.take_double("t0", config.solver.t0);
        solver.take_double("tf", config.solver.tf);
        RawEntry steps;
        if (solver.take("steps", steps)) {
            config.solver.n_steps = parse_size(steps, "steps");
            if (config.solver.n_steps < 1) {
                throw ConfigError(steps.line, "steps", "steps must be at least 1 (line " +
                                                           std::to_string(steps.line) + ")");
            }
        }
        solver.reject_leftovers();
        if (!(config.solver.tf > config.solver.t0)) {
            throw ConfigError(0, "tf", "solver horizon requires tf > t0");
        }
    }

    {
        SectionReader focp(sections["focp"], "focp");
        focp.take_bool("enabled", config.focp.enabled);
        focp.take_double("B1", config.focp.B1);
        focp.take_double("B2", config.focp.B2);
        RawEntry delta;
        if (focp.take("delta", delta)) {
            if (delta.value == "auto") {
                config.focp.delta_auto = true;
            } else {
                config.focp.delta_auto = false;
                config.focp.delta = parse_double(delta, "delta");
                if (!(config.focp.delta > 0.0)) {
                    throw ConfigError(delta.line, "delta", "delta must be positive (line " +
                                                               std::to_string(delta.line) + ")");
                }
            }
        }
        focp.take_double("v1_max", config.focp.v1_max);
        focp.take_double("v2_max", config.focp.v2_max);
        focp.take_double("C1", config.focp.C1);
        focp.take_double("C2", config.focp.C2);
        focp.take_size("max_iterations", config.focp.max_iterations);
        focp.take_double("tolerance", config.focp.tolerance);
        focp.take_double("relaxation", config.focp.relaxation);
        focp.reject_leftovers();
    }

    {
        SectionReader output(sections["output"], "output");
        output.take_string("directory", config.output.directory);
        RawEntry formats;
        if (output.take("formats", formats)) {
            config.output.csv = false;
            config.output.json = false;
            std::stringstream ss(formats.value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item == "csv") {
                    config.output.csv = true;
                } else if (item == "json") {
                    config.output.json = true;
                } else {
                    throw ConfigError(formats.line, "formats",
                                      "unknown output format '" + item + "' (line " +
                                          std::to_string(formats.line) + ")");
                }
            }
            if (!config.output.csv && !config.output.json) {
                throw ConfigError(formats.line, "formats", "formats list is empty (line " +
                                                               std::to_string(formats.line) + ")");
            }
        }
        output.reject_leftovers();
    }

    try {
        config.model.params.validate();
    } catch (const std::exception& e) {
        throw ConfigError(0, "model", std::string("invalid model parameters: ") + e.what());
    }
    return config;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(0, "", "cannot open config file: " + path);
    }
    return parse_config(in);
}

std::string dump_config(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "[model]\n";
    out << "lambda = " << format_double(c.model.params.Lambda) << "\n";
    out << "mu = " << format_double(c.model.params.mu) << "\n";
    out << "phi = " << format_double(c.model.params.phi) << "\n";
    out << "rho = " << format_double(c.model.params.rho) << "\n";
    out << "sigma = " << format_double(c.model.params.sigma) << "\n";
    out << "omega = " << format_double(c.model.params.omega) << "\n";
    out << "d = " << format_double(c.model.params.d) << "\n";
    out << "incidence = " << c.model.incidence.kind << "\n";
    out << "beta = " << format_double(c.model.incidence.beta) << "\n";
    out << "saturation_a = " << format_double(c.model.incidence.saturation_a) << "\n";
    out << "hattaf_a0 = " << format_double(c.model.incidence.hattaf_a0) << "\n";
    out << "hattaf_a1 = " << format_double(c.model.incidence.hattaf_a1) << "\n";
    out << "hattaf_a2 = " << format_double(c.model.incidence.hattaf_a2) << "\n";
    out << "initial = " << (c.model.initial.morocco ? "morocco" : "explicit") << "\n";
    out << "S0 = " << format_double(c.model.initial.state.S) << "\n";
    out << "I0 = " << format_double(c.model.initial.state.I) << "\n";
    out << "C0 = " << format_double(c.model.initial.state.C) << "\n";
    out << "A0 = " << format_double(c.model.initial.state.A) << "\n";
    out << "\n[solver]\n";
    out << "alphas = ";
    for (std::size_t i = 0; i < c.solver.alphas.size(); ++i) {
        out << (i ? ", " : "") << format_double(c.solver.alphas[i]);
    }
    out << "\n";
    out << "t0 = " << format_double(c.solver.t0) << "\n";
    out << "tf = " << format_double(c.solver.tf) << "\n";
    out << "steps = " << c.solver.n_steps << "\n";
    out << "\n[focp]\n";
    out << "enabled = " << (c.focp.enabled ? "true" : "false") << "\n";
    out << "B1 = " << format_double(c.focp.B1) << "\n";
    out << "B2 = " << format_double(c.focp.B2) << "\n";
    out << "delta = " << (c.focp.delta_auto ? std::string("auto") : format_double(c.focp.delta))
        << "\n";
    out << "v1_max = " << format_double(c.focp.v1_max) << "\n";
    out << "v2_max = " << format_double(c.focp.v2_max) << "\n";
    out << "C1 = " << format_double(c.focp.C1) << "\n";
    out << "C2 = " << format_double(c.focp.C2) << "\n";
    out << "max_iterations = " << c.focp.max_iterations << "\n";
    out << "tolerance = " << format_double(c.focp.tolerance) << "\n";
    out << "relaxation = " << format_double(c.focp.relaxation) << "\n";
    out << "\n[output]\n";
    out << "directory = " << c.output.directory << "\n";
    out << "formats = ";
    if (c.output.csv && c.output.json) {
        out << "csv,json";
    } else if (c.output.csv) {
        out << "csv";
    } else {
        out << "json";
    }
    out << "\n";
    return out.str();
}

sica::IncidencePtr make_incidence(const IncidenceConfig& config) {
    if (config.kind == "bilinear") {
        return sica::bilinear(config.beta);
    }
    if (config.kind == "saturated") {
        return sica::saturated(config.beta, config.saturation_a);
    }
    if (config.kind == "hattaf_yousfi") {
        return sica::hattaf_yousfi(config.beta, config.hattaf_a0, config.hattaf_a1,
                                   config.hattaf_a2);
    }
    throw ConfigError(0, "incidence", "unknown incidence kind '" + config.kind + "'");
}

sica::SicaState initial_state(const ModelConfig& config) {
    if (config.initial.morocco) {
        return sica::morocco_initial_state();
    }
    return config.initial.state;
}

}  // namespace fracsica::scenario
