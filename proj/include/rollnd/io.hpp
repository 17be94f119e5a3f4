#ifndef ROLLND_IO_HPP
#define ROLLND_IO_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace rollnd {

struct CsvTable {
    std::vector<std::string> header;
    Eigen::MatrixXd data;
    int col(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& data);

/// Structured-text reports: ordered "key = value" lines.
class Report {
public:
    void set(const std::string& key, double v);
    void set(const std::string& key, const std::string& v);
    void set(const std::string& key, bool v);
    void set_matrix(const std::string& key, const Eigen::MatrixXd& m);  // row-major
    void write(const std::string& path) const;
    void print(std::ostream& os) const;

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

/// key = value config files ('#' comments, blank lines ignored).
std::map<std::string, std::string> read_keyvalue_file(const std::string& path);

/// Formats a double so repeated runs produce byte-identical files.
std::string format_double(double v);

}  // namespace rollnd

#endif
