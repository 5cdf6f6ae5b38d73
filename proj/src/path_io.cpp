#include "tlevy/path_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tlevy {

void write_path_csv(const PathSample& path, std::ostream& out) {
    out.precision(17);
    out << "# n=" << path.design.n << " T=" << path.design.horizon
        << " B=" << path.design.thin_horizon
        << " drift=" << (path.covariates_are_drift ? 1 : 0) << "\n";
    if (path.has_truth) {
        out << "# truth sigma=" << path.truth.sigma << " nu=" << path.truth.nu << " mu=";
        for (std::size_t k = 0; k < path.truth.mu.size(); ++k)
            out << (k ? ";" : "") << path.truth.mu[k];
        out << "\n";
    }
    out << "t";
    for (std::size_t k = 0; k < path.q(); ++k) out << ",X_" << (k + 1);
    out << ",Y\n";
    for (std::size_t j = 0; j < path.times.size(); ++j) {
        out << path.times[j];
        for (double x : path.covariates[j]) out << ',' << x;
        out << ',' << path.responses[j] << "\n";
    }
}

PathSample read_path_csv(std::istream& in) {
    PathSample path;
    std::string line;
    bool header_seen = false;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string tok;
            while (meta >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "n") path.design.n = std::stoi(val);
                else if (key == "T") path.design.horizon = std::stod(val);
                else if (key == "B") path.design.thin_horizon = std::stod(val);
                else if (key == "drift") path.covariates_are_drift = val == "1";
                else if (key == "sigma") { path.truth.sigma = std::stod(val); path.has_truth = true; }
                else if (key == "nu") { path.truth.nu = std::stod(val); path.has_truth = true; }
                else if (key == "mu") {
                    path.truth.mu.clear();
                    std::istringstream ms(val);
                    std::string part;
                    while (std::getline(ms, part, ';'))
                        path.truth.mu.push_back(std::stod(part));
                    path.has_truth = true;
                }
            }
            continue;
        }
        if (!header_seen) {  // column header row
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
        if (cells.size() < 2)
            throw std::runtime_error("read_path_csv: malformed row at line " +
                                     std::to_string(line_no));
        path.times.push_back(cells.front());
        path.responses.push_back(cells.back());
        path.covariates.emplace_back(cells.begin() + 1, cells.end() - 1);
    }
    if (path.times.size() < 2) throw std::runtime_error("read_path_csv: no data rows");
    return path;
}

}  // namespace tlevy
