#include "dualdec/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dualdec/errors.hpp"

namespace dualdec {

namespace {

// ---------------------------------------------------------------------------
// A small sectioned key = value reader: [section] headers, scalar values
// (quoted strings, numbers, booleans), multi-line """...""" text blocks and
// (possibly nested, multi-line) numeric arrays. Just enough structure for the
// experiment schema; every diagnostic carries the offending line.
// ---------------------------------------------------------------------------

struct Value {
    enum class Kind { String, Number, Bool, Array } kind = Kind::Number;
    std::string str;
    double num = 0.0;
    bool boolean = false;
    std::vector<Value> items;
    int line = 0;
};

using Section = std::map<std::string, Value>;
using Document = std::map<std::string, Section>;

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
    std::size_t pos = s.find('#');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

double parse_number(const std::string& token, int line) {
    const std::string t = trim(token);
    if (t.empty()) fail(line, "expected a number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) fail(line, "bad number '" + t + "'");
    return v;
}

Value parse_array(const std::string& text, int line) {
    // text starts at '[' and is bracket-balanced; strings never occur inside.
    Value out;
    out.kind = Value::Kind::Array;
    out.line = line;
    std::vector<Value*> stack = {&out};
    std::string token;
    auto flush = [&](std::size_t at) {
        const std::string t = trim(token);
        token.clear();
        if (t.empty()) return;
        Value v;
        v.kind = Value::Kind::Number;
        v.num = parse_number(t, line);
        v.line = line;
        (void)at;
        stack.back()->items.push_back(std::move(v));
    };
    for (std::size_t i = 1; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '[') {
            Value v;
            v.kind = Value::Kind::Array;
            v.line = line;
            stack.back()->items.push_back(std::move(v));
            stack.push_back(&stack.back()->items.back());
        } else if (c == ']') {
            flush(i);
            stack.pop_back();
            if (stack.empty()) {
                if (trim(text.substr(i + 1)).empty()) return out;
                fail(line, "trailing text after array");
            }
        } else if (c == ',') {
            flush(i);
        } else {
            token += c;
        }
    }
    fail(line, "unterminated array");
}

Document parse_document(const std::string& text) {
    Document doc;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++lineno;
        return true;
    };

    while (next_line()) {
        std::string body = trim(strip_comment(line));
        if (body.empty()) continue;

        if (body.front() == '[') {
            if (body.back() != ']') fail(lineno, "malformed section header '" + body + "'");
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty()) fail(lineno, "empty section name");
            doc[section];  // sections may be empty
            continue;
        }

        const std::size_t eq = body.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value', got '" + body + "'");
        const std::string key = trim(body.substr(0, eq));
        if (key.empty()) fail(lineno, "empty key");
        std::string rest = trim(body.substr(eq + 1));
        const int key_line = lineno;

        Value v;
        v.line = key_line;
        if (rest.rfind("\"\"\"", 0) == 0) {
            // Multi-line text block; content is everything up to the closing fence.
            std::string content = rest.substr(3);
            std::size_t close = content.find("\"\"\"");
            if (close != std::string::npos) {
                v.str = content.substr(0, close);
            } else {
                std::string acc = content.empty() ? "" : content + "\n";
                bool done = false;
                while (next_line()) {
                    const std::size_t fence = line.find("\"\"\"");
                    if (fence != std::string::npos) {
                        acc += line.substr(0, fence);
                        done = true;
                        break;
                    }
                    acc += line + "\n";
                }
                if (!done) fail(key_line, "unterminated \"\"\" block for key '" + key + "'");
                v.str = acc;
            }
            v.kind = Value::Kind::String;
        } else if (!rest.empty() && rest.front() == '"') {
            const std::size_t close = rest.find('"', 1);
            if (close == std::string::npos) fail(key_line, "unterminated string");
            if (!trim(rest.substr(close + 1)).empty())
                fail(key_line, "trailing text after string value");
            v.kind = Value::Kind::String;
            v.str = rest.substr(1, close - 1);
        } else if (!rest.empty() && rest.front() == '[') {
            // Arrays may span lines: accumulate until brackets balance.
            std::string acc = rest;
            auto balance = [](const std::string& s) {
                long b = 0;
                for (char c : s) b += (c == '[') - (c == ']');
                return b;
            };
            while (balance(acc) > 0 && next_line()) acc += trim(strip_comment(line));
            if (balance(acc) != 0) fail(key_line, "unbalanced array for key '" + key + "'");
            v = parse_array(acc, key_line);
        } else if (rest == "true" || rest == "false") {
            v.kind = Value::Kind::Bool;
            v.boolean = rest == "true";
        } else {
            v.kind = Value::Kind::Number;
            v.num = parse_number(rest, key_line);
        }

        auto [it, inserted] = doc[section].emplace(key, std::move(v));
        if (!inserted)
            fail(key_line, "duplicate key '" + key + "' in section [" + section + "]");
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Mapping onto ExperimentConfig with field-level diagnostics.
// ---------------------------------------------------------------------------

class SectionReader {
   public:
    SectionReader(const Document& doc, std::string name) : name_(std::move(name)) {
        auto it = doc.find(name_);
        if (it != doc.end()) section_ = &it->second;
    }

    bool present() const { return section_ != nullptr; }

    const Value* find(const std::string& key) {
        if (!section_) return nullptr;
        auto it = section_->find(key);
        if (it == section_->end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    double number(const std::string& key, double fallback) {
        const Value* v = find(key);
        if (!v) return fallback;
        if (v->kind != Value::Kind::Number) fail(v->line, field(key) + " must be a number");
        return v->num;
    }

    long integer(const std::string& key, long fallback) {
        const Value* v = find(key);
        if (!v) return fallback;
        if (v->kind != Value::Kind::Number || v->num != std::floor(v->num))
            fail(v->line, field(key) + " must be an integer");
        return static_cast<long>(v->num);
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const Value* v = find(key);
        if (!v) return fallback;
        if (v->kind != Value::Kind::String) fail(v->line, field(key) + " must be a string");
        return v->str;
    }

    std::optional<std::vector<double>> number_array(const std::string& key) {
        const Value* v = find(key);
        if (!v) return std::nullopt;
        if (v->kind != Value::Kind::Array) fail(v->line, field(key) + " must be an array");
        std::vector<double> out;
        for (const Value& item : v->items) {
            if (item.kind != Value::Kind::Number)
                fail(v->line, field(key) + " must be a flat numeric array");
            out.push_back(item.num);
        }
        return out;
    }

    /// Array of numbers (taken as rows of width 1) or array of numeric arrays.
    std::optional<std::vector<std::vector<double>>> row_array(const std::string& key) {
        const Value* v = find(key);
        if (!v) return std::nullopt;
        if (v->kind != Value::Kind::Array) fail(v->line, field(key) + " must be an array");
        std::vector<std::vector<double>> out;
        for (const Value& item : v->items) {
            if (item.kind == Value::Kind::Number) {
                out.push_back({item.num});
            } else if (item.kind == Value::Kind::Array) {
                std::vector<double> row;
                for (const Value& cell : item.items) {
                    if (cell.kind != Value::Kind::Number)
                        fail(v->line, field(key) + " rows must be numeric");
                    row.push_back(cell.num);
                }
                out.push_back(std::move(row));
            } else {
                fail(v->line, field(key) + " must hold numbers or numeric rows");
            }
        }
        return out;
    }

    void finish() const {
        if (!section_) return;
        for (const auto& [key, value] : *section_)
            if (!used_.count(key))
                fail(value.line, "unknown key '" + key + "' in section [" + name_ + "]");
    }

   private:
    std::string field(const std::string& key) const { return "[" + name_ + "] " + key; }

    std::string name_;
    const Section* section_ = nullptr;
    std::set<std::string> used_;
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    const Document doc = parse_document(text);
    for (const auto& [name, _] : doc) {
        static const std::set<std::string> known = {"",       "problem", "graph",
                                                    "stepsize", "solver",  "oracle", "run"};
        if (!known.count(name)) throw ConfigError("config: unknown section [" + name + "]");
    }

    ExperimentConfig cfg;

    SectionReader root(doc, "");
    cfg.schema_version = static_cast<int>(root.integer("schema_version", 1));
    if (cfg.schema_version != 1)
        throw ConfigError("config: unsupported schema_version " +
                          std::to_string(cfg.schema_version));
    root.finish();

    SectionReader problem(doc, "problem");
    cfg.problem.family = problem.text("family", cfg.problem.family);
    cfg.problem.n = static_cast<int>(problem.integer("n", cfg.problem.n));
    cfg.problem.s_dim = static_cast<int>(problem.integer("s_dim", cfg.problem.s_dim));
    cfg.problem.seed = static_cast<std::uint64_t>(problem.integer("seed", 1));
    cfg.problem.big_m = problem.number("big_m", cfg.problem.big_m);
    if (auto w = problem.number_array("w")) cfg.problem.w = *w;
    if (auto r = problem.number_array("r")) cfg.problem.r = *r;
    if (auto lo = problem.number_array("lower")) cfg.problem.lower = *lo;
    if (auto hi = problem.number_array("upper")) cfg.problem.upper = *hi;
    if (auto a = problem.row_array("a")) cfg.problem.a = *a;
    if (auto b = problem.row_array("b")) cfg.problem.b = *b;
    problem.finish();

    SectionReader graph(doc, "graph");
    cfg.graph.family = graph.text("family", cfg.graph.family);
    cfg.graph.p = graph.number("p", cfg.graph.p);
    cfg.graph.seed = static_cast<std::uint64_t>(graph.integer("seed", 1));
    cfg.graph.edges = graph.text("edges", "");
    graph.finish();

    SectionReader step(doc, "stepsize");
    cfg.stepsize.c = step.number("c", cfg.stepsize.c);
    cfg.stepsize.a = step.number("a", cfg.stepsize.a);
    cfg.stepsize.t0 = step.number("t0", cfg.stepsize.t0);
    step.finish();

    SectionReader solver(doc, "solver");
    cfg.solver.tol = solver.number("tol", cfg.solver.tol);
    cfg.solver.max_outer_iters =
        static_cast<int>(solver.integer("max_outer_iters", cfg.solver.max_outer_iters));
    cfg.solver.mu_step_scale = solver.number("mu_step_scale", cfg.solver.mu_step_scale);
    cfg.solver.inner_tol = solver.number("inner_tol", cfg.solver.inner_tol);
    cfg.solver.max_inner_iters =
        static_cast<int>(solver.integer("max_inner_iters", cfg.solver.max_inner_iters));
    solver.finish();

    SectionReader oracle(doc, "oracle");
    cfg.oracle_tol = oracle.number("tol", cfg.oracle_tol);
    cfg.oracle_max_iters = static_cast<int>(oracle.integer("max_iters", cfg.oracle_max_iters));
    cfg.grid_points = static_cast<int>(oracle.integer("grid_points", cfg.grid_points));
    oracle.finish();

    SectionReader run(doc, "run");
    cfg.iterations = static_cast<int>(run.integer("iterations", cfg.iterations));
    cfg.lambda0 = run.text("lambda0", cfg.lambda0);
    cfg.lambda0_edges = run.text("lambda0_edges", "");
    cfg.out_dir = run.text("out_dir", cfg.out_dir);
    cfg.seeds = static_cast<int>(run.integer("seeds", cfg.seeds));
    run.finish();

    // Cross-field validation.
    if (cfg.problem.family != "quadratic-benchmark" && cfg.problem.family != "explicit")
        throw ConfigError("config: [problem] family must be 'quadratic-benchmark' or 'explicit'");
    if (cfg.problem.family == "explicit") {
        const std::size_t n = cfg.problem.w.size();
        if (n == 0) throw ConfigError("config: [problem] explicit family needs w, r, lower, upper, a, b");
        auto check_len = [&](const char* what, std::size_t len) {
            if (len != n)
                throw ConfigError(std::string("config: [problem] ") + what + " has " +
                                  std::to_string(len) + " entries, expected " + std::to_string(n));
        };
        check_len("r", cfg.problem.r.size());
        check_len("lower", cfg.problem.lower.size());
        check_len("upper", cfg.problem.upper.size());
        check_len("a", cfg.problem.a.size());
        check_len("b", cfg.problem.b.size());
        if (cfg.problem.n == 0) cfg.problem.n = static_cast<int>(n);
        if (cfg.problem.n != static_cast<int>(n))
            throw ConfigError("config: [problem] n disagrees with the explicit arrays");
        for (std::size_t i = 0; i < n; ++i)
            if (cfg.problem.a[i].size() != cfg.problem.b[i].size() ||
                static_cast<int>(cfg.problem.a[i].size()) != cfg.problem.s_dim)
                throw ConfigError("config: [problem] a/b rows must have s_dim entries");
    } else if (cfg.problem.n < 1) {
        throw ConfigError("config: [problem] n must be >= 1");
    }
    if (cfg.problem.s_dim < 1) throw ConfigError("config: [problem] s_dim must be >= 1");
    if (!(cfg.problem.big_m > 0)) throw ConfigError("config: [problem] big_m must be > 0");

    if (cfg.graph.family != "erdos-renyi" && cfg.graph.family != "complete" &&
        cfg.graph.family != "ring" && cfg.graph.family != "edge-list")
        throw ConfigError(
            "config: [graph] family must be 'erdos-renyi', 'complete', 'ring' or 'edge-list'");
    if (cfg.graph.family == "edge-list" && trim(cfg.graph.edges).empty() && cfg.problem.n > 1)
        throw ConfigError("config: [graph] edge-list family needs an edges block");
    if (cfg.graph.family == "erdos-renyi" && (cfg.graph.p < 0 || cfg.graph.p > 1))
        throw ConfigError("config: [graph] p must lie in [0, 1]");

    if (cfg.iterations < 0) throw ConfigError("config: [run] iterations must be >= 0");
    if (cfg.seeds < 1) throw ConfigError("config: [run] seeds must be >= 1");
    if (cfg.lambda0 != "zeros" && cfg.lambda0 != "edges")
        throw ConfigError("config: [run] lambda0 must be 'zeros' or 'edges'");
    if (cfg.lambda0 == "edges" && trim(cfg.lambda0_edges).empty())
        throw ConfigError("config: [run] lambda0 = 'edges' needs a lambda0_edges block");
    if (!(cfg.solver.tol > 0)) throw ConfigError("config: [solver] tol must be > 0");

    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

/// Shortest decimal form that parses back to the same double.
std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eEnN") == std::string::npos) s += ".0";  // keep it a float literal
    return s;
}

void emit_array(std::ostream& out, const char* key, const std::vector<double>& v) {
    out << key << " = [";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << fmt(v[i]);
    out << "]\n";
}

void emit_rows(std::ostream& out, const char* key, const std::vector<std::vector<double>>& rows) {
    out << key << " = [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << (i ? ", [" : "[");
        for (std::size_t j = 0; j < rows[i].size(); ++j) out << (j ? ", " : "") << fmt(rows[i][j]);
        out << "]";
    }
    out << "]\n";
}

}  // namespace

std::string render_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "schema_version = " << cfg.schema_version << "\n\n";

    out << "[problem]\n";
    out << "family = \"" << cfg.problem.family << "\"\n";
    out << "n = " << cfg.problem.n << "\n";
    out << "s_dim = " << cfg.problem.s_dim << "\n";
    out << "seed = " << cfg.problem.seed << "\n";
    out << "big_m = " << fmt(cfg.problem.big_m) << "\n";
    if (cfg.problem.family == "explicit") {
        emit_array(out, "w", cfg.problem.w);
        emit_array(out, "r", cfg.problem.r);
        emit_array(out, "lower", cfg.problem.lower);
        emit_array(out, "upper", cfg.problem.upper);
        emit_rows(out, "a", cfg.problem.a);
        emit_rows(out, "b", cfg.problem.b);
    }

    out << "\n[graph]\n";
    out << "family = \"" << cfg.graph.family << "\"\n";
    if (cfg.graph.family == "erdos-renyi") {
        out << "p = " << fmt(cfg.graph.p) << "\n";
        out << "seed = " << cfg.graph.seed << "\n";
    }
    if (!cfg.graph.edges.empty()) out << "edges = \"\"\"\n" << cfg.graph.edges << "\"\"\"\n";

    out << "\n[stepsize]\n";
    out << "c = " << fmt(cfg.stepsize.c) << "\n";
    out << "a = " << fmt(cfg.stepsize.a) << "\n";
    out << "t0 = " << fmt(cfg.stepsize.t0) << "\n";

    out << "\n[solver]\n";
    out << "tol = " << fmt(cfg.solver.tol) << "\n";
    out << "max_outer_iters = " << cfg.solver.max_outer_iters << "\n";
    out << "mu_step_scale = " << fmt(cfg.solver.mu_step_scale) << "\n";
    out << "inner_tol = " << fmt(cfg.solver.inner_tol) << "\n";
    out << "max_inner_iters = " << cfg.solver.max_inner_iters << "\n";

    out << "\n[oracle]\n";
    out << "tol = " << fmt(cfg.oracle_tol) << "\n";
    out << "max_iters = " << cfg.oracle_max_iters << "\n";
    out << "grid_points = " << cfg.grid_points << "\n";

    out << "\n[run]\n";
    out << "iterations = " << cfg.iterations << "\n";
    out << "lambda0 = \"" << cfg.lambda0 << "\"\n";
    if (!cfg.lambda0_edges.empty())
        out << "lambda0_edges = \"\"\"\n" << cfg.lambda0_edges << "\"\"\"\n";
    out << "out_dir = \"" << cfg.out_dir << "\"\n";
    out << "seeds = " << cfg.seeds << "\n";
    return out.str();
}

CoupledProblem build_problem(const ProblemSpec& spec) {
    if (spec.family == "quadratic-benchmark")
        return benchmark_instance(spec.n, spec.s_dim, spec.seed);

    std::vector<std::shared_ptr<const LocalProblem>> locals;
    locals.reserve(spec.w.size());
    for (std::size_t i = 0; i < spec.w.size(); ++i) {
        Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(spec.a[i].data(),
                                                              static_cast<long>(spec.a[i].size()));
        Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(spec.b[i].data(),
                                                              static_cast<long>(spec.b[i].size()));
        locals.push_back(std::make_shared<QuadBoxLinearLocal>(spec.w[i], spec.r[i], spec.lower[i],
                                                              spec.upper[i], std::move(a),
                                                              std::move(b)));
    }
    return make_coupled(std::move(locals), spec.big_m);
}

Graph build_graph(const GraphSpec& spec, int n, int* er_retries) {
    if (er_retries) *er_retries = 0;
    if (spec.family == "complete") return complete(n);
    if (spec.family == "ring") return ring(n);
    if (spec.family == "edge-list") return graph_from_edge_list(spec.edges, n);
    return erdos_renyi(n, spec.p, spec.seed, 1000, er_retries);
}

std::optional<std::vector<Eigen::VectorXd>> build_lambda0(const ExperimentConfig& cfg,
                                                          const Graph& g, int s_dim) {
    if (cfg.lambda0 == "zeros") return std::nullopt;

    const DirectedEdgeIndex idx(g);
    std::vector<Eigen::VectorXd> lambda0(idx.count(), Eigen::VectorXd::Zero(s_dim));
    std::istringstream in(cfg.lambda0_edges);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        long i = 0, j = 0;
        if (!(ls >> i)) continue;
        if (!(ls >> j))
            throw ConfigError("lambda0_edges line " + std::to_string(lineno) +
                              ": expected 'i j v_1 .. v_S'");
        if (i < 1 || j < 1 || i > g.n || j > g.n)
            throw ConfigError("lambda0_edges line " + std::to_string(lineno) +
                              ": node out of range");
        Eigen::VectorXd v(s_dim);
        for (int s = 0; s < s_dim; ++s)
            if (!(ls >> v[s]))
                throw ConfigError("lambda0_edges line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(s_dim) + " values");
        double extra;
        if (ls >> extra)
            throw ConfigError("lambda0_edges line " + std::to_string(lineno) +
                              ": too many values");
        lambda0[idx.index(static_cast<int>(i - 1), static_cast<int>(j - 1))] = std::move(v);
    }
    return lambda0;
}

}  // namespace dualdec
