#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xwigner/field.hpp"
#include "xwigner/reconstruction.hpp"

namespace xwigner {

// Insertion-ordered key=value block written as '# key=value' header lines.
// No timestamps: identical inputs must produce byte-identical files.
struct Metadata {
    std::vector<std::pair<std::string, std::string>> entries;

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    const std::string* find(const std::string& key) const;
};

// Text format: metadata header, '# columns: x k re im', then one line per
// grid point, blank line between x blocks (gnuplot splot ready).
void write_field_csv(const std::string& path, const PhaseSpaceField& f, const Metadata& meta);
std::pair<PhaseSpaceField, Metadata> read_field_csv(const std::string& path);

// Flat little-endian binary: magic "XWIG1", u32 nx, u32 nk, f64 x_axis,
// f64 k_axis, f64 interleaved re/im (x-major). Round-trips bit-exact.
void write_field_bin(const std::string& path, const PhaseSpaceField& f);
PhaseSpaceField read_field_bin(const std::string& path);

// Sinogram text format mirrors the field format with columns 'x row value'.
void write_sinogram_csv(const std::string& path, const Sinogram& s, const Metadata& meta);
std::pair<Sinogram, Metadata> read_sinogram_csv(const std::string& path);

// Sinograms reuse the XWIG1 container with zero imaginary parts.
PhaseSpaceField sinogram_as_field(const Sinogram& s);

// Deterministic shortest-lossless double formatting used by all writers.
std::string format_double(double v);

} // namespace xwigner
