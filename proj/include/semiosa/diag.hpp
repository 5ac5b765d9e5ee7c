#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace semiosa {

// Where a diagnostic came from. Syntax and resolution problems make the input
// unusable; validation problems describe a well-formed but broken declaration.
enum class DiagKind { syntax, resolve, validate };

struct Diagnostic {
    DiagKind kind = DiagKind::validate;
    std::string code;    // stable machine-readable tag, e.g. "SubsortCycle"
    std::string where;   // context path, e.g. "system Toy / fact f1"
    std::string message;
    int line = 0;        // 1-based source position when known, 0 otherwise
    int col = 0;

    std::string format() const {
        std::string out = code;
        if (line > 0) out += " at " + std::to_string(line) + ":" + std::to_string(col);
        if (!where.empty()) out += " [" + where + "]";
        out += ": " + message;
        return out;
    }
};

inline Diagnostic make_diag(DiagKind kind, std::string code, std::string where,
                            std::string message, int line = 0, int col = 0) {
    return Diagnostic{kind, std::move(code), std::move(where), std::move(message), line, col};
}

// Engine operations report contract violations by throwing. `code` matches the
// operation's documented error name; `stage` is set by multi-stage pipelines.
struct Error : std::runtime_error {
    std::string code;
    std::string stage;

    Error(std::string c, const std::string& message, std::string s = {})
        : std::runtime_error(message), code(std::move(c)), stage(std::move(s)) {}
};

[[noreturn]] inline void fail(std::string code, const std::string& message,
                              std::string stage = {}) {
    throw Error(std::move(code), message, std::move(stage));
}

} // namespace semiosa
