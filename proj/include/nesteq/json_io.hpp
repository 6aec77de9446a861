#ifndef NESTEQ_JSON_IO_HPP
#define NESTEQ_JSON_IO_HPP

#include <string>

#include "nesteq/oracle.hpp"
#include "nesteq/structure.hpp"

namespace nesteq {

// Structure file format (JSON):
//   { "n": int, "order": bool, "eq": [[class per element] per level],
//     "pre": [[level per element] per level], "feq": [[..],[..]],
//     "unary": {name:[elems]}, "binary": {name:[[i,j],...]},
//     "constants": {name: elem} }
// Levels are listed from k=1 upward; absent keys mean absent symbols. When
// "pre" is present and "eq" absent, the equivalences are derived.
std::string structure_to_json(const Structure& s);
Structure structure_from_json(const std::string& text);

// Verdict file format (JSON):
//   { "status": "sat"|"unsat-certified"|"unknown", "cap": int,
//     "bound": int|null, "model": StructureFile|null, "stats": {...} }
std::string verdict_to_json(const Verdict& v);

}  // namespace nesteq

#endif
