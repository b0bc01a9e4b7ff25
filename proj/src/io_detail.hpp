#ifndef TL_SRC_IO_DETAIL_HPP
#define TL_SRC_IO_DETAIL_HPP

#include <json.hpp>

#include "tl/algebra.hpp"
#include "tl/dynamics.hpp"

// Shared pieces of the document layer: the io translation unit owns the
// parsing, the report builders reuse the value encodings.
namespace tl {
namespace detail {

using Json = nlohmann::ordered_json;

Json matrix_json(const Matrix& m);
Json a_element_json(const DynSystem& sys, const AElement& a);
Json element_json(const DynSystem& sys, const CPElement& f);
Json system_json(const DynSystem& sys);

// Deterministic plain-text rendering of a report document: objects as
// indented key/value lines, arrays of objects as dashed items, arrays of
// numbers inline. Numbers are printed exactly as in the structured form.
std::string render_text(const Json& doc);

}  // namespace detail
}  // namespace tl

#endif  // TL_SRC_IO_DETAIL_HPP
