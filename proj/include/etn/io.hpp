#ifndef ETN_IO_HPP
#define ETN_IO_HPP

#include <iosfwd>
#include <string>

#include "etn/tensor.hpp"

namespace etn {

/// TNS-JSON: {"dims":[...],"data":[...]} with data column-major.
std::string to_tns_json(const DenseTensor& t);
DenseTensor from_tns_json(const std::string& text);

void save_tns_json(const DenseTensor& t, const std::string& path);
DenseTensor load_tns_json(const std::string& path);

/// Binary ".tns": magic "TNS1", u32-LE order, order x u64-LE dims, then
/// column-major f64-LE payload.
void save_tns_binary(const DenseTensor& t, const std::string& path);
DenseTensor load_tns_binary(const std::string& path);

/// Dispatches on extension: ".json" -> TNS-JSON, ".tns" -> binary.
void save_tensor(const DenseTensor& t, const std::string& path);
DenseTensor load_tensor(const std::string& path);

} // namespace etn

#endif
