#include "levelcs/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace levelcs {

namespace {

std::vector<double> parse_row(const std::string& line, const std::string& path) {
    std::vector<double> values;
    std::stringstream stream(line);
    std::string token;
    while (std::getline(stream, token, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(token, &used));
        } catch (const std::exception&) {
            throw std::runtime_error(path + ": bad number '" + token + "'");
        }
    }
    return values;
}

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

}  // namespace

DenseMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(parse_row(line, path));
        if (rows.back().size() != rows.front().size())
            throw std::runtime_error(path + ": ragged row " + std::to_string(rows.size()));
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty matrix");
    DenseMatrix A(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (!A.all_finite()) throw std::runtime_error(path + ": non-finite entry");
    return A;
}

void write_matrix_csv(const DenseMatrix& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) {
            if (j) out << ',';
            out << format_double(A(i, j));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

DenseVector read_vector_csv(const std::string& path) {
    const DenseMatrix table = read_matrix_csv(path);
    if (table.cols() == 1) {
        DenseVector x(table.rows(), 0.0);
        for (int i = 0; i < table.rows(); ++i) x[i] = table(i, 0);
        return x;
    }
    if (table.rows() == 1) {
        DenseVector x(table.cols(), 0.0);
        for (int j = 0; j < table.cols(); ++j) x[j] = table(0, j);
        return x;
    }
    throw std::runtime_error(path + ": expected a vector (one value per line)");
}

void write_vector_csv(const DenseVector& x, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int i = 0; i < x.dim(); ++i) out << format_double(x[i]) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace levelcs
