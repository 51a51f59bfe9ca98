#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvlasso {

using Vector = std::vector<double>;
/// Coefficient vector of length p.
using CoefVector = std::vector<double>;

/**
 * Dense column-major matrix.
 *
 * Column-major storage keeps every covariate contiguous, which is what the
 * coordinate-descent inner loop walks over.
 */
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

    std::span<const double> col(std::size_t j) const noexcept {
        return {data_.data() + j * rows_, rows_};
    }
    std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }

    const std::vector<double>& data() const noexcept { return data_; }

    /// Copy of the rows listed in `idx`, in that order.
    Matrix select_rows(std::span<const std::size_t> idx) const {
        Matrix out(idx.size(), cols_);
        for (std::size_t j = 0; j < cols_; ++j) {
            auto src = col(j);
            auto dst = out.col(j);
            for (std::size_t r = 0; r < idx.size(); ++r) dst[r] = src[idx[r]];
        }
        return out;
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

/// x·b, length rows(x).
inline Vector multiply(const Matrix& x, std::span<const double> b) {
    require(b.size() == x.cols(), "multiply: coefficient length does not match column count");
    Vector out(x.rows(), 0.0);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const double bj = b[j];
        if (bj == 0.0) continue;
        auto c = x.col(j);
        for (std::size_t i = 0; i < x.rows(); ++i) out[i] += c[i] * bj;
    }
    return out;
}

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Observations (x, y) with n rows and p covariates.
struct Dataset {
    Matrix x;
    Vector y;

    Dataset() = default;
    Dataset(Matrix design, Vector response) : x(std::move(design)), y(std::move(response)) {
        validate();
    }

    std::size_t n() const noexcept { return x.rows(); }
    std::size_t p() const noexcept { return x.cols(); }

    void validate() const {
        require(x.rows() >= 1 && x.cols() >= 1, "Dataset: need n >= 1 and p >= 1");
        require(x.rows() == y.size(), "Dataset: row count of x differs from length of y");
        for (double v : x.data())
            if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite entry in x");
        for (double v : y)
            if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite entry in y");
    }

    Dataset subset(std::span<const std::size_t> idx) const {
        Vector ys(idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r) ys[r] = y[idx[r]];
        Dataset out;
        out.x = x.select_rows(idx);
        out.y = std::move(ys);
        return out;
    }

    bool operator==(const Dataset&) const = default;
};

/// The true coefficients and realized noise behind a simulated Dataset.
struct TruthBundle {
    CoefVector beta_true;
    Vector eps;
};

/// ‖δ‖ in the design-weighted norm: sqrt(m⁻¹ Σ (x_i'δ)²) over the rows of x.
inline double prediction_norm(const Matrix& x, std::span<const double> delta) {
    require(delta.size() == x.cols(), "prediction_norm: delta length does not match column count");
    require(x.rows() >= 1, "prediction_norm: need at least one row");
    const Vector fit = multiply(x, delta);
    return std::sqrt(dot(fit, fit) / static_cast<double>(x.rows()));
}

struct CoefNorms {
    std::size_t l0 = 0;
    double l1 = 0.0;
    double l2 = 0.0;
};

/// l0 counts exact nonzeros.
inline CoefNorms coef_norms(std::span<const double> delta) noexcept {
    CoefNorms out;
    double sq = 0.0;
    for (double v : delta) {
        if (v != 0.0) ++out.l0;
        out.l1 += std::abs(v);
        sq += v * v;
    }
    out.l2 = std::sqrt(sq);
    return out;
}

inline std::size_t count_nonzero(std::span<const double> v) noexcept {
    std::size_t k = 0;
    for (double e : v) k += (e != 0.0);
    return k;
}

// ---------------------------------------------------------------------------
// CSV fixtures: header `y,x1,...,xp`, one observation per line.

inline void write_csv(std::ostream& os, const Dataset& data) {
    os << "y";
    for (std::size_t j = 0; j < data.p(); ++j) os << ",x" << (j + 1);
    os << '\n';
    char buf[32];
    for (std::size_t i = 0; i < data.n(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", data.y[i]);
        os << buf;
        for (std::size_t j = 0; j < data.p(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", data.x(i, j));
            os << ',' << buf;
        }
        os << '\n';
    }
}

inline Dataset read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_csv: empty input");
    std::size_t p = 0;
    {
        std::stringstream hs(line);
        std::string cell;
        std::getline(hs, cell, ',');
        if (cell != "y") throw std::runtime_error("read_csv: header must start with 'y'");
        while (std::getline(hs, cell, ',')) {
            if (cell != "x" + std::to_string(p + 1))
                throw std::runtime_error("read_csv: unexpected header column '" + cell + "'");
            ++p;
        }
    }
    if (p == 0) throw std::runtime_error("read_csv: no covariate columns");

    std::vector<Vector> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        Vector row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                throw std::runtime_error("read_csv: bad number on line " + std::to_string(lineno));
            }
        }
        if (row.size() != p + 1)
            throw std::runtime_error("read_csv: wrong field count on line " + std::to_string(lineno));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("read_csv: no observations");

    Matrix x(rows.size(), p);
    Vector y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        y[i] = rows[i][0];
        for (std::size_t j = 0; j < p; ++j) x(i, j) = rows[i][j + 1];
    }
    return Dataset(std::move(x), std::move(y));
}

inline void save_csv(const std::string& path, const Dataset& data) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(os, data);
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

inline Dataset load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    try {
        return read_csv(is);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace cvlasso
