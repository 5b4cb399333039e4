#pragma once

#include <stdexcept>
#include <string>

namespace ineqcond {

/// Base class for all structured rejections. `kind()` is a stable
/// machine-readable tag used by the CLI error objects.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error("ShapeError", what) {}
};

class NonFiniteEntryError : public Error {
public:
    explicit NonFiniteEntryError(const std::string& what) : Error("NonFiniteEntry", what) {}
};

/// Column indices are reported 1-based, matching the a_1..a_n naming of columns.
class ZeroColumnError : public Error {
public:
    explicit ZeroColumnError(int column)
        : Error("ZeroColumn", "column " + std::to_string(column) + " has zero norm"),
          column_(column) {}
    int column() const { return column_; }

private:
    int column_;
};

class RankDeficientError : public Error {
public:
    explicit RankDeficientError(double sigma_ratio)
        : Error("RankDeficient",
                "sigma_min/sigma_max = " + std::to_string(sigma_ratio) + " below rank tolerance"),
          sigma_ratio_(sigma_ratio) {}
    double sigma_ratio() const { return sigma_ratio_; }

private:
    double sigma_ratio_;
};

class DimensionMismatchError : public Error {
public:
    explicit DimensionMismatchError(const std::string& what) : Error("DimensionMismatch", what) {}
};

class NotASolutionError : public Error {
public:
    explicit NotASolutionError(const std::string& what) : Error("NotASolution", what) {}
};

class NotAProjectorError : public Error {
public:
    explicit NotAProjectorError(const std::string& what) : Error("NotAProjector", what) {}
};

class DegenerateHullError : public Error {
public:
    explicit DegenerateHullError(const std::string& what) : Error("DegenerateHull", what) {}
};

/// m == n: the set of ill-posed subspaces of full dimension is empty.
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error("Degenerate", what) {}
};

class IllPosedError : public Error {
public:
    explicit IllPosedError(const std::string& what) : Error("IllPosed", what) {}
};

class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& what) : Error("Unsupported", what) {}
};

class NoFeasibleDirectionError : public Error {
public:
    explicit NoFeasibleDirectionError(const std::string& what)
        : Error("NoFeasibleDirection", what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("ParseError", what) {}
};

}  // namespace ineqcond
