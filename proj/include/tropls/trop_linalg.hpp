#pragma once

#include "tropls/pl.hpp"

#include <optional>
#include <vector>

namespace tropls {

class TropMatrix {
 public:
  TropMatrix() = default;
  TropMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit TropMatrix(const std::vector<std::vector<ExtRational>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const ExtRational& operator()(std::size_t i, std::size_t j) const { return data_.at(i * cols_ + j); }
  ExtRational& operator()(std::size_t i, std::size_t j) { return data_.at(i * cols_ + j); }
  TropMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
  TropMatrix transposed() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<ExtRational> data_;
};

struct TropDeterminant {
  ExtRational value;
  bool nonsingular = false;
};

TropDeterminant trop_det(const TropMatrix& a);

// Rows R are independent when some shift a makes every row of R the unique minimum in some column.
struct RowCertificate {
  std::vector<std::size_t> rows;
  std::vector<Rational> shifts;        // aligned with rows
  std::vector<std::size_t> witnesses;  // column where each row is the unique minimum
};

std::optional<RowCertificate> independence_of_rows(const TropMatrix& a, const std::vector<std::size_t>& rows);

// Largest independent row set; the search stops early once `stop_at` rows are found.
RowCertificate max_independent_rows(const TropMatrix& a, std::optional<std::size_t> stop_at = std::nullopt);

std::size_t trop_rank(const TropMatrix& a);

TropMatrix evaluation_matrix(const std::vector<PLFunction>& fns, const std::vector<Point>& pts);

// Vertices of the order refinement plus, on each of its segments, as many interior points as
// there are distinct slopes among the functions there.
std::vector<Point> sample_points(const std::vector<PLFunction>& fns);

struct IndependenceCertificate {
  std::vector<Rational> coefficients;
  std::vector<Point> witnesses;
};

std::optional<IndependenceCertificate> independence_certificate(const std::vector<PLFunction>& fns);
// Checks the defining property directly.
bool verify_certificate(const std::vector<PLFunction>& fns, const IndependenceCertificate& c);

}  // namespace tropls
