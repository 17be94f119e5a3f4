#include "rollnd/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rollnd {

int CsvTable::col(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        size_t a = field.find_first_not_of(" \t\r");
        size_t b = field.find_last_not_of(" \t\r");
        out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
    }
    return out;
}
}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv file: " + path);
    CsvTable table;
    std::string line;
    std::vector<std::vector<double>> rows;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line);
        if (fields.empty()) continue;
        if (!have_header) {
            // header row: first field is not numeric
            char* end = nullptr;
            std::strtod(fields[0].c_str(), &end);
            if (end == fields[0].c_str() || *end != '\0') {
                table.header = fields;
                have_header = true;
                continue;
            }
            have_header = true;  // header-less file
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto& f : fields) {
            // strtod tolerates subnormal underflow where stod throws
            char* end = nullptr;
            double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str())
                throw std::runtime_error("bad numeric field '" + f + "' in " + path);
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty csv file: " + path);
    size_t ncol = rows[0].size();
    table.data.resize(static_cast<long>(rows.size()), static_cast<long>(ncol));
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != ncol)
            throw std::runtime_error("ragged csv file: " + path);
        for (size_t j = 0; j < ncol; ++j)
            table.data(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
    }
    return table;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& data) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv file: " + path);
    for (size_t j = 0; j < header.size(); ++j)
        out << (j ? "," : "") << header[j];
    out << "\n";
    for (long i = 0; i < data.rows(); ++i) {
        for (long j = 0; j < data.cols(); ++j)
            out << (j ? "," : "") << format_double(data(i, j));
        out << "\n";
    }
}

void Report::set(const std::string& key, double v) {
    items_.emplace_back(key, format_double(v));
}
void Report::set(const std::string& key, const std::string& v) {
    items_.emplace_back(key, v);
}
void Report::set(const std::string& key, bool v) {
    items_.emplace_back(key, v ? "true" : "false");
}
void Report::set_matrix(const std::string& key, const Eigen::MatrixXd& m) {
    std::string s;
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) {
            if (!s.empty()) s += " ";
            s += format_double(m(i, j));
        }
    items_.emplace_back(key, s);
}
void Report::print(std::ostream& os) const {
    for (auto& [k, v] : items_) os << k << " = " << v << "\n";
}
void Report::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    print(out);
}

std::map<std::string, std::string> read_keyvalue_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) out[key] = val;
    }
    return out;
}

}  // namespace rollnd
