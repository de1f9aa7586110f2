#pragma once

#include "tdcis/analysis.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tdcis {

inline constexpr const char* kVersion = "1.0.0";

// shortest decimal form that round-trips a double; shared by every writer so
// identical inputs give bit-identical files
std::string format_num(double v);

uint64_t fnv1a(std::string_view bytes);
uint64_t fnv1a_file(const std::string& path);
std::string hash_string(uint64_t h); // "fnv1a:<16 hex digits>"

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// delimited numeric columns under a '#' header block; the last header line
// names the columns
struct Table {
    std::vector<std::string> comments; // without the leading '#'
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string str() const;
    void write(const std::string& path) const;
    int column(const std::string& name) const; // -1 when absent
};

Table read_table(const std::string& path);
Table parse_table(const std::string& text, const std::string& name = "<string>");

// yields-table exchange format written by intensity scans and read back by
// `analyze`/`fit`: omega_ev intensity_wcm2 tau_fs p1 [p2 ...]
Table yields_table(const std::vector<IonizationRecord>& recs);
std::vector<IonizationRecord> yields_records(const Table& t);

// ordered key = value report with [section] markers; no timestamps, so a
// rerun of the same inputs reproduces the file byte for byte
class Manifest {
  public:
    void kv(const std::string& key, const std::string& value);
    void kv(const std::string& key, double value);
    void kv(const std::string& key, long value);
    void section(const std::string& name);
    void raw(const std::string& line);
    std::string str() const;
    void write(const std::string& path) const;

  private:
    std::vector<std::string> lines_;
};

} // namespace tdcis
