#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ponplace/milp.hpp"
#include "ponplace/num_text.hpp"

namespace ponplace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void append_terms(std::string& out, const MilpModel& m, const std::vector<MilpTerm>& terms,
                  const char* indent) {
    int on_line = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        double c = terms[i].coeff;
        if (i == 0) {
            if (c < 0) out += "- ";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        out += num_text(std::abs(c));
        out += ' ';
        out += m.variables[terms[i].var].name;
        if (++on_line == 6 && i + 1 < terms.size()) {
            out += '\n';
            out += indent;
            on_line = 0;
        }
    }
    if (terms.empty()) out += "0";
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        char ch = i < text.size() ? text[i] : '\n';
        if (ch == '\\') {  // LP comment to end of line
            while (i < text.size() && text[i] != '\n') ++i;
            ch = '\n';
        }
        if (isspace((unsigned char)ch)) {
            if (!cur.empty()) {
                tokens.push_back(cur);
                cur.clear();
            }
        } else if (ch == '+' || ch == '-' || ch == ':') {
            // keep exponent signs ("1e-05") inside the number token
            if ((ch == '+' || ch == '-') && !cur.empty() &&
                (cur.back() == 'e' || cur.back() == 'E') &&
                (isdigit((unsigned char)cur[0]) || cur[0] == '.')) {
                cur += ch;
                continue;
            }
            if (!cur.empty()) {
                tokens.push_back(cur);
                cur.clear();
            }
            tokens.emplace_back(1, ch);
        } else if (ch == '<' || ch == '>' || ch == '=') {
            // fold <=, >=, = into a sense token
            if (!cur.empty()) {
                tokens.push_back(cur);
                cur.clear();
            }
            std::string sense(1, ch);
            if (i + 1 < text.size() && text[i + 1] == '=') {
                sense += '=';
                ++i;
            }
            tokens.push_back(sense);
        } else {
            cur += ch;
        }
    }
    return tokens;
}

bool is_number_start(const std::string& t) {
    return !t.empty() && (isdigit((unsigned char)t[0]) || t[0] == '.');
}

bool keyword(const std::string& t, const char* kw) {
    if (t.size() != std::string(kw).size()) return false;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (tolower((unsigned char)t[i]) != tolower((unsigned char)kw[i])) return false;
    return true;
}

struct LpParser {
    const std::vector<std::string>& toks;
    std::size_t pos = 0;
    MilpModel model;
    std::map<std::string, int> var_of;

    explicit LpParser(const std::vector<std::string>& t) : toks(t) {}

    int var(const std::string& name) {
        auto it = var_of.find(name);
        if (it != var_of.end()) return it->second;
        int idx = (int)model.variables.size();
        model.variables.push_back({name, VarKind::continuous, 0.0, kInf});
        var_of[name] = idx;
        return idx;
    }

    bool at_section() const {
        if (pos >= toks.size()) return true;
        const std::string& t = toks[pos];
        return keyword(t, "subject") || keyword(t, "st") || keyword(t, "bounds") ||
               keyword(t, "binaries") || keyword(t, "binary") || keyword(t, "general") ||
               keyword(t, "generals") || keyword(t, "end");
    }

    std::vector<MilpTerm> parse_terms(std::string* sense_out, double* rhs_out) {
        std::vector<MilpTerm> terms;
        double sign = 1.0;
        while (pos < toks.size() && !at_section()) {
            const std::string& t = toks[pos];
            if (t == "+") {
                sign = 1.0;
                ++pos;
            } else if (t == "-") {
                sign = -1.0;
                ++pos;
            } else if (t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">") {
                if (!sense_out) throw std::runtime_error("unexpected sense in objective");
                *sense_out = t;
                ++pos;
                double rhs_sign = 1.0;
                if (pos < toks.size() && (toks[pos] == "-" || toks[pos] == "+")) {
                    rhs_sign = toks[pos] == "-" ? -1.0 : 1.0;
                    ++pos;
                }
                if (pos >= toks.size()) throw std::runtime_error("missing rhs");
                *rhs_out = rhs_sign * parse_num(toks[pos]);
                ++pos;
                return terms;
            } else if (is_number_start(t)) {
                double c = sign * parse_num(t);
                ++pos;
                if (pos < toks.size() && !at_section() && toks[pos] != "+" &&
                    toks[pos] != "-" && !is_number_start(toks[pos]) && toks[pos] != "<=" &&
                    toks[pos] != ">=" && toks[pos] != "=") {
                    terms.push_back({var(toks[pos]), c});
                    ++pos;
                } else if (c == 0.0) {
                    // bare constant 0 stands for an empty expression
                } else {
                    throw std::runtime_error("constant term in expression");
                }
                sign = 1.0;
            } else {
                // next row starts: "name :" — caller handles; bail if ':' follows
                if (pos + 1 < toks.size() && toks[pos + 1] == ":") return terms;
                terms.push_back({var(t), sign * 1.0});
                sign = 1.0;
                ++pos;
            }
        }
        return terms;
    }

    MilpModel run() {
        if (pos >= toks.size() || !keyword(toks[pos], "minimize"))
            throw std::runtime_error("LP must start with Minimize");
        ++pos;
        if (pos + 1 < toks.size() && toks[pos + 1] == ":") pos += 2;  // "obj :"
        model.objective = parse_terms(nullptr, nullptr);

        if (pos < toks.size() && keyword(toks[pos], "subject")) {
            ++pos;
            if (pos < toks.size() && keyword(toks[pos], "to")) ++pos;
        } else if (pos < toks.size() && keyword(toks[pos], "st")) {
            ++pos;
        }

        while (pos < toks.size() && !keyword(toks[pos], "bounds") &&
               !keyword(toks[pos], "binaries") && !keyword(toks[pos], "binary") &&
               !keyword(toks[pos], "end")) {
            std::string name = toks[pos];
            if (pos + 1 >= toks.size() || toks[pos + 1] != ":")
                throw std::runtime_error("constraint must be named: " + name);
            pos += 2;
            std::string sense;
            double rhs = 0;
            auto terms = parse_terms(&sense, &rhs);
            ConstraintSense cs = sense == "<=" || sense == "<"   ? ConstraintSense::le
                                 : sense == ">=" || sense == ">" ? ConstraintSense::ge
                                                                 : ConstraintSense::eq;
            if (sense.empty()) throw std::runtime_error("constraint missing sense: " + name);
            model.constraints.push_back({name, std::move(terms), cs, rhs});
        }

        if (pos < toks.size() && keyword(toks[pos], "bounds")) {
            ++pos;
            // forms: "lo <= name <= hi", "name <= hi", "name >= lo", "name = v"
            while (pos < toks.size() && !keyword(toks[pos], "binaries") &&
                   !keyword(toks[pos], "binary") && !keyword(toks[pos], "end")) {
                double lo = 0, hi = kInf;
                if (is_number_start(toks[pos]) || toks[pos] == "-") {
                    double sign = 1.0;
                    if (toks[pos] == "-") {
                        sign = -1;
                        ++pos;
                    }
                    lo = sign * parse_num(toks[pos]);
                    ++pos;
                    if (toks[pos] != "<=") throw std::runtime_error("bad bounds line");
                    ++pos;
                    int v = var(toks[pos]);
                    ++pos;
                    if (pos < toks.size() && toks[pos] == "<=") {
                        ++pos;
                        hi = parse_num(toks[pos]);
                        ++pos;
                    }
                    model.variables[v].lower = lo;
                    model.variables[v].upper = hi;
                } else {
                    int v = var(toks[pos]);
                    ++pos;
                    std::string op = toks[pos];
                    ++pos;
                    double val = parse_num(toks[pos]);
                    ++pos;
                    if (op == "<=")
                        model.variables[v].upper = val;
                    else if (op == ">=")
                        model.variables[v].lower = val;
                    else if (op == "=")
                        model.variables[v].lower = model.variables[v].upper = val;
                    else
                        throw std::runtime_error("bad bounds operator " + op);
                }
            }
        }

        if (pos < toks.size() &&
            (keyword(toks[pos], "binaries") || keyword(toks[pos], "binary"))) {
            ++pos;
            while (pos < toks.size() && !keyword(toks[pos], "end")) {
                int v = var(toks[pos]);
                model.variables[v].kind = VarKind::binary;
                model.variables[v].lower = 0;
                model.variables[v].upper = 1;
                ++pos;
            }
        }
        if (pos >= toks.size() || !keyword(toks[pos], "end"))
            throw std::runtime_error("LP must end with End");
        return std::move(model);
    }
};

}  // namespace

std::string export_lp(const MilpModel& m) {
    std::string out;
    out += "Minimize\n obj: ";
    append_terms(out, m, m.objective, "      ");
    out += "\nSubject To\n";
    for (const auto& con : m.constraints) {
        out += ' ';
        out += con.name;
        out += ": ";
        append_terms(out, m, con.terms, "      ");
        switch (con.sense) {
            case ConstraintSense::le: out += " <= "; break;
            case ConstraintSense::ge: out += " >= "; break;
            case ConstraintSense::eq: out += " = "; break;
        }
        out += num_text(con.rhs);
        out += '\n';
    }

    std::string bounds;
    for (const auto& v : m.variables) {
        if (v.kind == VarKind::binary) continue;
        if (v.lower == 0.0 && v.upper == kInf) continue;  // LP default
        bounds += ' ';
        if (v.upper == kInf) {
            bounds += v.name + " >= " + num_text(v.lower);
        } else {
            bounds += num_text(v.lower) + " <= " + v.name + " <= " + num_text(v.upper);
        }
        bounds += '\n';
    }
    if (!bounds.empty()) {
        out += "Bounds\n";
        out += bounds;
    }

    bool any_binary = false;
    for (const auto& v : m.variables) any_binary |= v.kind == VarKind::binary;
    if (any_binary) {
        out += "Binaries\n";
        int on_line = 0;
        for (const auto& v : m.variables) {
            if (v.kind != VarKind::binary) continue;
            out += on_line == 0 ? " " : " ";
            out += v.name;
            if (++on_line == 8) {
                out += '\n';
                on_line = 0;
            }
        }
        if (on_line) out += '\n';
    }
    out += "End\n";
    return out;
}

MilpModel parse_lp(const std::string& text) {
    auto toks = tokenize(text);
    LpParser p(toks);
    return p.run();
}

std::string export_mps(const MilpModel& m, const MpsOptions& opts) {
    auto pad = [](const std::string& s, std::size_t w) {
        std::string r = s;
        if (r.size() < w)
            r.append(w - r.size(), ' ');
        else
            r += ' ';
        return r;
    };

    std::vector<std::string> row_names, col_names;
    row_names.reserve(m.constraints.size());
    for (const auto& c : m.constraints) row_names.push_back(c.name);
    for (const auto& v : m.variables) col_names.push_back(v.name);
    std::string header;

    if (opts.strict_fixed) {
        std::vector<std::string> overlong;
        for (const auto& n : row_names)
            if (n.size() > 8) overlong.push_back(n);
        for (const auto& n : col_names)
            if (n.size() > 8) overlong.push_back(n);
        if (!overlong.empty() && !opts.mangle_long_names) {
            std::string msg = "names exceed the 8-character fixed MPS field:";
            for (std::size_t i = 0; i < overlong.size() && i < 5; ++i)
                msg += " " + overlong[i];
            if (overlong.size() > 5) msg += " ...";
            msg += " (enable mangle_long_names for deterministic short names)";
            throw std::runtime_error(msg);
        }
        if (!overlong.empty()) {
            for (std::size_t i = 0; i < row_names.size(); ++i)
                if (row_names[i].size() > 8) {
                    std::string shorter = "R" + std::to_string(i);
                    header += "* LONGNAME " + shorter + " " + row_names[i] + "\n";
                    row_names[i] = shorter;
                }
            for (std::size_t i = 0; i < col_names.size(); ++i)
                if (col_names[i].size() > 8) {
                    std::string shorter = "C" + std::to_string(i);
                    header += "* LONGNAME " + shorter + " " + col_names[i] + "\n";
                    col_names[i] = shorter;
                }
        }
    }

    std::string out = header;
    out += "NAME          PONPLACE\n";
    out += "ROWS\n";
    out += " N  obj\n";
    for (std::size_t i = 0; i < m.constraints.size(); ++i) {
        switch (m.constraints[i].sense) {
            case ConstraintSense::le: out += " L  "; break;
            case ConstraintSense::ge: out += " G  "; break;
            case ConstraintSense::eq: out += " E  "; break;
        }
        out += row_names[i];
        out += '\n';
    }

    // Transpose: per column, its objective and row entries in row order.
    std::vector<std::vector<std::pair<int, double>>> col_entries(m.variables.size());
    for (const auto& t : m.objective) col_entries[t.var].push_back({-1, t.coeff});
    for (std::size_t ci = 0; ci < m.constraints.size(); ++ci)
        for (const auto& t : m.constraints[ci].terms)
            col_entries[t.var].push_back({(int)ci, t.coeff});

    out += "COLUMNS\n";
    bool in_integer = false;
    int marker_id = 0;
    for (std::size_t vi = 0; vi < m.variables.size(); ++vi) {
        bool is_int = m.variables[vi].kind == VarKind::binary;
        if (is_int && !in_integer) {
            out += "    " + pad("M" + std::to_string(marker_id++), 10) +
                   "'MARKER'                 'INTORG'\n";
            in_integer = true;
        } else if (!is_int && in_integer) {
            out += "    " + pad("M" + std::to_string(marker_id++), 10) +
                   "'MARKER'                 'INTEND'\n";
            in_integer = false;
        }
        auto& entries = col_entries[vi];
        if (entries.empty()) entries.push_back({-1, 0.0});  // declare the column
        for (const auto& [row, coeff] : entries) {
            out += "    " + pad(col_names[vi], 10) +
                   pad(row < 0 ? "obj" : row_names[row], 10) + num_text(coeff) + "\n";
        }
    }
    if (in_integer)
        out += "    " + pad("M" + std::to_string(marker_id++), 10) +
               "'MARKER'                 'INTEND'\n";

    out += "RHS\n";
    for (std::size_t ci = 0; ci < m.constraints.size(); ++ci)
        if (m.constraints[ci].rhs != 0.0)
            out += "    " + pad("rhs", 10) + pad(row_names[ci], 10) +
                   num_text(m.constraints[ci].rhs) + "\n";

    std::string bounds;
    for (std::size_t vi = 0; vi < m.variables.size(); ++vi) {
        const MilpVar& v = m.variables[vi];
        if (v.kind == VarKind::binary) {
            bounds += " UP " + pad("bnd", 10) + pad(col_names[vi], 10) + "1\n";
        } else {
            if (v.lower != 0.0)
                bounds += " LO " + pad("bnd", 10) + pad(col_names[vi], 10) +
                          num_text(v.lower) + "\n";
            if (v.upper != kInf)
                bounds += " UP " + pad("bnd", 10) + pad(col_names[vi], 10) +
                          num_text(v.upper) + "\n";
        }
    }
    if (!bounds.empty()) {
        out += "BOUNDS\n";
        out += bounds;
    }
    out += "ENDATA\n";
    return out;
}

MilpModel parse_mps(const std::string& text) {
    MilpModel m;
    std::map<std::string, int> row_of, var_of;
    std::map<int, ConstraintSense> sense_of;
    bool in_integer = false;
    std::string section;

    auto ensure_var = [&](const std::string& name) {
        auto it = var_of.find(name);
        if (it != var_of.end()) return it->second;
        int idx = (int)m.variables.size();
        m.variables.push_back({name,
                               in_integer ? VarKind::binary : VarKind::continuous, 0.0,
                               in_integer ? 1.0 : kInf});
        var_of[name] = idx;
        return idx;
    };

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        std::istringstream ls(line);
        std::vector<std::string> f;
        std::string tok;
        while (ls >> tok) f.push_back(tok);
        if (f.empty()) continue;

        if (!isspace((unsigned char)line[0])) {
            section = f[0];
            continue;
        }
        if (section == "ROWS") {
            if (f.size() < 2) throw std::runtime_error("bad ROWS line: " + line);
            if (f[0] == "N") continue;  // objective row
            ConstraintSense s = f[0] == "L"   ? ConstraintSense::le
                                : f[0] == "G" ? ConstraintSense::ge
                                              : ConstraintSense::eq;
            if (f[0] != "L" && f[0] != "G" && f[0] != "E")
                throw std::runtime_error("bad row type: " + f[0]);
            row_of[f[1]] = (int)m.constraints.size();
            m.constraints.push_back({f[1], {}, s, 0.0});
        } else if (section == "COLUMNS") {
            if (f.size() >= 3 && f[1] == "'MARKER'") {
                in_integer = f[2] == "'INTORG'";
                continue;
            }
            if (f.size() < 3 || (f.size() - 1) % 2 != 0)
                throw std::runtime_error("bad COLUMNS line: " + line);
            int v = ensure_var(f[0]);
            for (std::size_t i = 1; i + 1 < f.size(); i += 2) {
                double coeff = parse_num(f[i + 1]);
                if (f[i] == "obj") {
                    if (coeff != 0.0) m.objective.push_back({v, coeff});
                } else {
                    auto it = row_of.find(f[i]);
                    if (it == row_of.end())
                        throw std::runtime_error("unknown row " + f[i]);
                    m.constraints[it->second].terms.push_back({v, coeff});
                }
            }
        } else if (section == "RHS") {
            if (f.size() < 3) throw std::runtime_error("bad RHS line: " + line);
            for (std::size_t i = 1; i + 1 < f.size(); i += 2) {
                auto it = row_of.find(f[i]);
                if (it == row_of.end()) throw std::runtime_error("unknown row " + f[i]);
                m.constraints[it->second].rhs = parse_num(f[i + 1]);
            }
        } else if (section == "BOUNDS") {
            if (f.size() < 3) throw std::runtime_error("bad BOUNDS line: " + line);
            auto it = var_of.find(f[2]);
            if (it == var_of.end()) throw std::runtime_error("unknown column " + f[2]);
            MilpVar& v = m.variables[it->second];
            if (f[0] == "UP")
                v.upper = parse_num(f[3]);
            else if (f[0] == "LO")
                v.lower = parse_num(f[3]);
            else if (f[0] == "FX")
                v.lower = v.upper = parse_num(f[3]);
            else if (f[0] == "BV") {
                v.kind = VarKind::binary;
                v.lower = 0;
                v.upper = 1;
            } else
                throw std::runtime_error("unsupported bound type " + f[0]);
        } else if (section == "RANGES") {
            throw std::runtime_error("RANGES section not supported");
        } else if (section == "ENDATA" || section == "NAME") {
            // nothing
        }
    }
    for (const auto& v : m.variables)
        if (v.kind == VarKind::binary && (v.lower != 0.0 || v.upper != 1.0))
            throw std::runtime_error("integer variable " + v.name +
                                     " with non-binary bounds is not supported");
    return m;
}

}  // namespace ponplace
