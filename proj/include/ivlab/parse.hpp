#pragma once

// Textual body expressions.
//
//   body := "point:" INT
//         | "ball:" INT "," REAL
//         | "box:" REAL { "," REAL }
//         | "cube:" INT [ "," REAL ]
//         | "product(" body ";" body ")"
//         | "scale(" REAL ";" body ")"
//         | "embed(" body ";" INT ")"
//         | "translate(" REAL { "," REAL } ";" body ")"
//
// "cube:n" is the unit box of n ones; "cube:n,s" is scale(s; cube:n).
// Whitespace is not allowed.

#include <cstddef>
#include <string>
#include <string_view>

#include "ivlab/body.hpp"
#include "ivlab/errors.hpp"

namespace ivlab {

class ParseError : public InputError {
public:
    ParseError(std::size_t offset, const std::string& what)
        : InputError("at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

Body parse_body(std::string_view text);

// Inverse of parse_body: parse_body(format_body(b)) == b.
std::string format_body(const Body& body);

}  // namespace ivlab
