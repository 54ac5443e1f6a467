#pragma once

#include <iosfwd>
#include <string>

#include "porta/pa.hpp"

namespace porta {

// Thrown on schema violations; the message names the offending JSON path.
class PaFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Pa load_pa(std::istream& in);
Pa load_pa_file(const std::string& path);

// Deterministic: sorted states/letters/entries, 2-space indent.
std::string save_pa(const Pa& a);
void save_pa_file(const Pa& a, const std::string& path);

}  // namespace porta
