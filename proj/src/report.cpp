#include "bpl/report.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace bpl {

nlohmann::json make_report(const std::string& command, const nlohmann::json& config_echo,
                           const nlohmann::json& results, std::uint64_t seed) {
    nlohmann::json j;
    j["format_version"] = kReportFormatVersion;
    j["command"] = command;
    j["seed"] = seed;
    j["config"] = config_echo;
    j["results"] = results;
    j["meta"] = nlohmann::json::object();
    return j;
}

namespace {

void diff_walk(const nlohmann::json& a, const nlohmann::json& b, const std::string& path,
               double tol, std::vector<ReportDiff>& out) {
    if (a.is_object() && b.is_object()) {
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (it.key() == "meta") continue;
            if (!b.contains(it.key())) {
                out.push_back({path + "/" + it.key(), "missing in second report"});
                continue;
            }
            diff_walk(it.value(), b.at(it.key()), path + "/" + it.key(), tol, out);
        }
        for (auto it = b.begin(); it != b.end(); ++it)
            if (it.key() != "meta" && !a.contains(it.key()))
                out.push_back({path + "/" + it.key(), "missing in first report"});
        return;
    }
    if (a.is_array() && b.is_array()) {
        if (a.size() != b.size()) {
            std::ostringstream os;
            os << "array length " << a.size() << " vs " << b.size();
            out.push_back({path, os.str()});
            return;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            diff_walk(a[i], b[i], path + "/" + std::to_string(i), tol, out);
        return;
    }
    if (a.is_number() && b.is_number()) {
        double x = a.get<double>(), y = b.get<double>();
        double scale = std::max({1.0, std::abs(x), std::abs(y)});
        if (!(std::abs(x - y) <= tol * scale)) {
            std::ostringstream os;
            os << x << " vs " << y << " (tol " << tol << ")";
            out.push_back({path, os.str()});
        }
        return;
    }
    if (a != b) {
        out.push_back({path, a.dump() + " vs " + b.dump()});
    }
}

}  // namespace

std::vector<ReportDiff> compare_reports(const nlohmann::json& a, const nlohmann::json& b,
                                        double tol) {
    std::vector<ReportDiff> out;
    diff_walk(a, b, "", tol, out);
    return out;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    f >> j;
    return j;
}

namespace {

struct TomlCursor {
    const std::string& s;
    std::size_t i = 0;
    int line = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << "toml parse error, line " << line << ": " << msg;
        throw std::runtime_error(os.str());
    }
    bool eof() const { return i >= s.size(); }
    char peek() const { return s[i]; }
    void skip_ws() {
        while (!eof() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
};

nlohmann::json toml_value(TomlCursor& c);

nlohmann::json toml_array(TomlCursor& c) {
    nlohmann::json arr = nlohmann::json::array();
    ++c.i;  // '['
    for (;;) {
        c.skip_ws();
        if (c.eof()) c.fail("unterminated array");
        if (c.peek() == ']') {
            ++c.i;
            return arr;
        }
        arr.push_back(toml_value(c));
        c.skip_ws();
        if (!c.eof() && c.peek() == ',') {
            ++c.i;
            continue;
        }
        if (!c.eof() && c.peek() == ']') {
            ++c.i;
            return arr;
        }
        c.fail("expected ',' or ']' in array");
    }
}

nlohmann::json toml_value(TomlCursor& c) {
    c.skip_ws();
    if (c.eof()) c.fail("expected a value");
    char ch = c.peek();
    if (ch == '[') return toml_array(c);
    if (ch == '"') {
        ++c.i;
        std::string v;
        while (!c.eof() && c.peek() != '"') v += c.s[c.i++];
        if (c.eof()) c.fail("unterminated string");
        ++c.i;
        return v;
    }
    std::string tok;
    while (!c.eof() && (std::isalnum(unsigned(c.peek())) || std::strchr("+-._", c.peek())))
        tok += c.s[c.i++];
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.empty()) c.fail("expected a value");
    try {
        if (tok.find_first_of(".eE") != std::string::npos &&
            tok.find_first_of("0123456789") != std::string::npos) {
            std::size_t used = 0;
            double d = std::stod(tok, &used);
            if (used == tok.size()) return d;
        } else {
            std::size_t used = 0;
            long long v = std::stoll(tok, &used, 10);
            if (used == tok.size()) return v;
        }
    } catch (const std::exception&) {
    }
    c.fail("cannot parse value '" + tok + "'");
}

}  // namespace

nlohmann::json toml_lite_parse(const std::string& text) {
    nlohmann::json out = nlohmann::json::object();
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        // strip comments outside strings
        std::string s;
        bool instr = false;
        for (char ch : raw) {
            if (ch == '"') instr = !instr;
            if (ch == '#' && !instr) break;
            s += ch;
        }
        std::size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = s.find_last_not_of(" \t\r");
        s = s.substr(b, e - b + 1);
        if (s.front() == '[') {
            if (s.back() != ']') throw std::runtime_error("toml parse error: bad section header");
            section = s.substr(1, s.size() - 2);
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw std::runtime_error("toml parse error: expected key = value");
        std::string key = s.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        if (key.empty()) throw std::runtime_error("toml parse error: empty key");
        TomlCursor c{s, eq + 1, line};
        nlohmann::json v = toml_value(c);
        c.skip_ws();
        if (!c.eof()) throw std::runtime_error("toml parse error: trailing characters after value");
        out[section.empty() ? key : section + "." + key] = v;
    }
    return out;
}

nlohmann::json read_config_file(const std::string& path) {
    auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".json") return read_json_file(path);
    if (ext == ".toml") {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot open: " + path);
        std::ostringstream os;
        os << f.rdbuf();
        return toml_lite_parse(os.str());
    }
    throw std::runtime_error("config file must end in .json or .toml: " + path);
}

}  // namespace bpl
