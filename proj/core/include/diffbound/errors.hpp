#pragma once

#include <stdexcept>
#include <string>

namespace diffbound {

// Base for everything thrown by the library on bad input or exhausted caps.
// Distinct from assertion failures, which indicate internal bugs.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input text could not be parsed; `position` is a 0-based byte offset.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// A term or formula is ill-sorted for the signature in use.
class SortError : public Error {
public:
    using Error::Error;
};

// A formula is well-sorted but outside the decidable fragment of the
// theory asked to handle it. Carries the printed offending subformula.
class FragmentError : public Error {
public:
    FragmentError(const std::string& msg, std::string formula_text)
        : Error(msg + ": " + formula_text),
          formula_text_(std::move(formula_text)) {}
    const std::string& formula_text() const { return formula_text_; }

private:
    std::string formula_text_;
};

// A configured cap (degree, work-list size, search ceiling, ...) was hit.
// Callers that can report partial results catch this and do so.
class CapExceeded : public Error {
public:
    using Error::Error;
};

// Arity or shape mismatch in a numeric pipeline or evaluation context.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Evaluation of a bound expression met a primitive with no binding.
class UnboundPrimitive : public Error {
public:
    explicit UnboundPrimitive(const std::string& name)
        : Error("unbound primitive: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

}  // namespace diffbound
