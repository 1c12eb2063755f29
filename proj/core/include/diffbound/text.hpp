#pragma once

#include <map>
#include <string>

#include "diffbound/logic.hpp"

namespace diffbound::text {

// Canonical prefix text. Grammar (also in the README):
//   formula := true | false | (not f) | (and f*) | (or f*) | (=> f f)
//            | (iff f f) | (exists (x S) f) | (forall (x S) f)
//            | (= t t) | (< t t) | (<= t t)          ; <= parses as (not (< b a))
//   term    := rational | ident | (+ t t+) | (- t) | (- t t) | (* t t+)
//            | (^ t nat)                              ; parses to repeated *
//            | (dK t)                                 ; K-th derivation
//   ident   := [A-Za-z_][A-Za-z0-9_']* , optionally annotated ident:SORT
// Printing never emits <= or ^.
std::string print_term(const logic::TermPtr& t);
std::string print_formula(const logic::FormulaPtr& f);

struct ParseContext {
    logic::Signature signature;
    logic::Sort default_sort;                           // unannotated free vars
    std::map<std::string, logic::Sort> free_var_sorts;  // pre-declared free vars
};

// Throws ParseError (with offset) or SortError. The result is sort-checked.
logic::FormulaPtr parse_formula(const std::string& input, const ParseContext& ctx);

// Standalone term, same conventions.
logic::TermPtr parse_term(const std::string& input, const ParseContext& ctx);

}  // namespace diffbound::text
