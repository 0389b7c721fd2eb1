#pragma once

#include <string>

#include "ist/field.hpp"

namespace ist {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ISTF snapshot: magic "ISTF", u32 version (= 1), u32 dimension count (1|2),
// u32 point count per axis, f64 half-width per axis, then samples as
// interleaved (re, im) f64, row-major. All integers and floats little-endian.
void write_istf(const std::string& path, const ComplexField1D& f);
void write_istf(const std::string& path, const ComplexField2D& f);
ComplexField1D read_istf_1d(const std::string& path);
ComplexField2D read_istf_2d(const std::string& path);
int istf_dimension(const std::string& path);

}  // namespace ist
