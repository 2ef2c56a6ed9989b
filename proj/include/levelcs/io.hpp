#pragma once

#include <string>

#include "levelcs/dense.hpp"

namespace levelcs {

// Plain CSV, one matrix row per line, decimal doubles, no header.
DenseMatrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const DenseMatrix& A, const std::string& path);

// Vectors are one value per line (a single-row file is also accepted).
DenseVector read_vector_csv(const std::string& path);
void write_vector_csv(const DenseVector& x, const std::string& path);

}  // namespace levelcs
