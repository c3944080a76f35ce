#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tdakit {

/// Input violates a documented precondition (bad parameter, malformed data).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A complex or filtration breaks a structural invariant (missing face,
/// non-monotone values, duplicate cells).
class StructureError : public std::runtime_error {
public:
    explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};

/// Collects non-fatal notices such as clamped parameters. Operations take an
/// optional pointer; passing nullptr discards the messages.
struct Warnings {
    std::vector<std::string> messages;

    void add(std::string msg) { messages.push_back(std::move(msg)); }
    bool empty() const { return messages.empty(); }
};

inline void warn(Warnings* sink, std::string msg)
{
    if (sink != nullptr)
        sink->add(std::move(msg));
}

}  // namespace tdakit
