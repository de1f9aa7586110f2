#include "tdcis/io.hpp"

#include <cmath>

#include "tdcis/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tdcis {

std::string format_num(double v) {
    char buf[40];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // trim digits while the value still round-trips; keeps tables readable
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        double back = 0;
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

uint64_t fnv1a(std::string_view bytes) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t fnv1a_file(const std::string& path) { return fnv1a(read_text_file(path)); }

std::string hash_string(uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require_config(in.good(), "cannot read file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    require_config(out.good(), "cannot write file: " + path);
    out << text;
    require_numeric(out.good(), "write failed: " + path);
}

std::string Table::str() const {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    std::string head = "# columns:";
    for (const auto& c : columns) head += " " + c;
    out += head + "\n";
    for (const auto& row : rows) {
        std::string line;
        for (double v : row) {
            if (!line.empty()) line += " ";
            line += format_num(v);
        }
        out += line + "\n";
    }
    return out;
}

void Table::write(const std::string& path) const { write_text_file(path, str()); }

int Table::column(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

Table parse_table(const std::string& text, const std::string& name) {
    Table t;
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            size_t b = line.find_first_not_of("# ");
            std::string body = b == std::string::npos ? "" : line.substr(b);
            if (body.rfind("columns:", 0) == 0) {
                std::istringstream cols(body.substr(8));
                std::string c;
                while (cols >> c) t.columns.push_back(c);
            } else {
                t.comments.push_back(body);
            }
            continue;
        }
        require_config(!t.columns.empty(),
                       name + ":" + std::to_string(ln) + ": data before a '# columns:' header");
        std::istringstream row(line);
        std::vector<double> vals;
        std::string tok;
        while (row >> tok) {
            size_t pos = 0;
            double v = 0;
            try {
                v = std::stod(tok, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            require_config(pos == tok.size(),
                           name + ":" + std::to_string(ln) + ": not a number: '" + tok + "'");
            vals.push_back(v);
        }
        if (!t.rows.empty())
            require_config(vals.size() == t.rows.front().size(),
                           name + ":" + std::to_string(ln) + ": ragged row");
        t.rows.push_back(std::move(vals));
    }
    if (!t.columns.empty() && !t.rows.empty())
        require_config(t.columns.size() == t.rows.front().size(),
                       name + ": column names do not match the row width");
    return t;
}

Table read_table(const std::string& path) { return parse_table(read_text_file(path), path); }

Table yields_table(const std::vector<IonizationRecord>& recs) {
    Table t;
    require_config(!recs.empty(), "yields table: no records");
    const size_t orders = recs.front().p_n.size();
    t.columns = {"omega_ev", "intensity_wcm2", "tau_fs"};
    for (size_t n = 1; n <= orders; ++n) t.columns.push_back("p" + std::to_string(n));
    for (const auto& r : recs) {
        require_config(r.p_n.size() == orders, "yields table: records disagree on order count");
        std::vector<double> row{r.omega_ev, r.intensity_wcm2, r.tau_fs};
        row.insert(row.end(), r.p_n.begin(), r.p_n.end());
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<IonizationRecord> yields_records(const Table& t) {
    require_config(t.columns.size() >= 4 && t.columns[0] == "omega_ev" &&
                       t.columns[1] == "intensity_wcm2" && t.columns[2] == "tau_fs",
                   "yields table must start with columns omega_ev intensity_wcm2 tau_fs p1 ...");
    for (size_t i = 3; i < t.columns.size(); ++i)
        require_config(t.columns[i] == "p" + std::to_string(i - 2),
                       "yields table: unexpected column '" + t.columns[i] + "'");
    std::vector<IonizationRecord> recs;
    for (const auto& row : t.rows) {
        IonizationRecord r;
        r.omega_ev = row[0];
        r.intensity_wcm2 = row[1];
        r.tau_fs = row[2];
        r.p_n.assign(row.begin() + 3, row.end());
        recs.push_back(std::move(r));
    }
    return recs;
}

void Manifest::kv(const std::string& key, const std::string& value) {
    lines_.push_back(key + " = " + value);
}
void Manifest::kv(const std::string& key, double value) { kv(key, format_num(value)); }
void Manifest::kv(const std::string& key, long value) { kv(key, std::to_string(value)); }
void Manifest::section(const std::string& name) { lines_.push_back("[" + name + "]"); }
void Manifest::raw(const std::string& line) { lines_.push_back(line); }

std::string Manifest::str() const {
    std::string out;
    for (const auto& l : lines_) out += l + "\n";
    return out;
}

void Manifest::write(const std::string& path) const { write_text_file(path, str()); }

} // namespace tdcis
