#ifndef DCM_ERRORS_HPP
#define DCM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dcm {

struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct SamePair : std::runtime_error {
    explicit SamePair(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyDataset : std::runtime_error {
    explicit EmptyDataset(const std::string& what) : std::runtime_error(what) {}
};

struct Disconnected : std::runtime_error {
    explicit Disconnected(const std::string& what) : std::runtime_error(what) {}
};

struct ModelMissing : std::runtime_error {
    explicit ModelMissing(const std::string& what) : std::runtime_error(what) {}
};

struct DisconnectedAtEntry : std::runtime_error {
    explicit DisconnectedAtEntry(const std::string& what) : std::runtime_error(what) {}
};

struct IterationLimit : std::runtime_error {
    explicit IterationLimit(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyRun : std::runtime_error {
    explicit EmptyRun(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& what, int line_, int column_)
        : std::runtime_error(what + " (line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ")"),
          line(line_), column(column_) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dcm

#endif
