#include "xwigner/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "xwigner/errors.hpp"

namespace xwigner {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Metadata::set(const std::string& key, const std::string& value) {
    for (auto& e : entries) {
        if (e.first == key) {
            e.second = value;
            return;
        }
    }
    entries.emplace_back(key, value);
}

void Metadata::set(const std::string& key, double value) { set(key, format_double(value)); }

const std::string* Metadata::find(const std::string& key) const {
    for (const auto& e : entries)
        if (e.first == key) return &e.second;
    return nullptr;
}

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream os(path, mode);
    if (!os) throw io_error("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream is(path, mode);
    if (!is) throw io_error("cannot open for reading: " + path);
    return is;
}

void write_header(std::ofstream& os, const Metadata& meta) {
    for (const auto& [k, v] : meta.entries) os << "# " << k << "=" << v << "\n";
}

Metadata read_header(std::ifstream& is, std::string& first_data_line) {
    Metadata meta;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos && line.rfind("# columns:", 0) != 0) {
                std::string key = line.substr(2, eq - 2);
                meta.set(key, line.substr(eq + 1));
            }
            continue;
        }
        first_data_line = line;
        break;
    }
    return meta;
}

// Little-endian scalar I/O; file layout is fixed regardless of host order.
template <typename T>
void put_le(std::ofstream& os, T v) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
    os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::ifstream& is) {
    std::array<unsigned char, sizeof(T)> bytes{};
    is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
    if (!is) throw io_error("unexpected end of binary grid file");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
}

constexpr char kMagic[5] = {'X', 'W', 'I', 'G', '1'};

} // namespace

void write_field_csv(const std::string& path, const PhaseSpaceField& f, const Metadata& meta) {
    f.check();
    auto os = open_out(path);
    write_header(os, meta);
    os << "# columns: x k re im\n";
    for (std::size_t ix = 0; ix < f.nx(); ++ix) {
        for (std::size_t ik = 0; ik < f.nk(); ++ik) {
            const cdouble v = f.at(ix, ik);
            os << format_double(f.x_axis[ix]) << " " << format_double(f.k_axis[ik]) << " "
               << format_double(v.real()) << " " << format_double(v.imag()) << "\n";
        }
        if (ix + 1 < f.nx()) os << "\n"; // block separator for gnuplot splot
    }
    if (!os) throw io_error("write failed: " + path);
}

std::pair<PhaseSpaceField, Metadata> read_field_csv(const std::string& path) {
    auto is = open_in(path);
    std::string line;
    Metadata meta = read_header(is, line);

    PhaseSpaceField f;
    std::vector<double> xs, ks;
    std::vector<cdouble> vals;
    double prev_x = 0.0;
    bool have_x = false;
    auto consume = [&](const std::string& l) {
        if (l.empty()) return;
        std::istringstream ss(l);
        double x, k, re, im;
        if (!(ss >> x >> k >> re >> im)) throw io_error("malformed CSV row in " + path);
        if (!have_x || x != prev_x) {
            xs.push_back(x);
            have_x = true;
            prev_x = x;
        }
        if (xs.size() == 1) ks.push_back(k);
        vals.emplace_back(re, im);
    };
    consume(line);
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] == '#') continue;
        consume(line);
    }
    f.x_axis = std::move(xs);
    f.k_axis = std::move(ks);
    f.values = std::move(vals);
    if (const std::string* p = meta.find("provenance")) {
        if (*p == "oracle") f.provenance = Provenance::oracle;
        else if (*p == "reconstructed") f.provenance = Provenance::reconstructed;
        else f.provenance = Provenance::analytic;
    }
    f.check();
    return {std::move(f), std::move(meta)};
}

void write_field_bin(const std::string& path, const PhaseSpaceField& f) {
    f.check();
    auto os = open_out(path, std::ios::out | std::ios::binary);
    os.write(kMagic, sizeof(kMagic));
    put_le<std::uint32_t>(os, std::uint32_t(f.nx()));
    put_le<std::uint32_t>(os, std::uint32_t(f.nk()));
    for (double x : f.x_axis) put_le(os, x);
    for (double k : f.k_axis) put_le(os, k);
    for (const cdouble& v : f.values) {
        put_le(os, v.real());
        put_le(os, v.imag());
    }
    if (!os) throw io_error("write failed: " + path);
}

PhaseSpaceField read_field_bin(const std::string& path) {
    auto is = open_in(path, std::ios::in | std::ios::binary);
    char magic[5];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw io_error("not an XWIG1 grid file: " + path);
    const auto nx = get_le<std::uint32_t>(is);
    const auto nk = get_le<std::uint32_t>(is);
    if (nx < 2 || nk < 2 || std::uint64_t(nx) * nk > (std::uint64_t(1) << 28))
        throw io_error("implausible grid dimensions in " + path);
    PhaseSpaceField f;
    f.x_axis.resize(nx);
    f.k_axis.resize(nk);
    f.values.resize(std::size_t(nx) * nk);
    for (auto& x : f.x_axis) x = get_le<double>(is);
    for (auto& k : f.k_axis) k = get_le<double>(is);
    for (auto& v : f.values) {
        const double re = get_le<double>(is);
        const double im = get_le<double>(is);
        v = cdouble(re, im);
    }
    f.check();
    return f;
}

void write_sinogram_csv(const std::string& path, const Sinogram& s, const Metadata& meta) {
    auto os = open_out(path);
    write_header(os, meta);
    os << "# columns: " << (s.row_kind == RowAxisKind::time ? "tau" : "theta") << " x value\n";
    for (std::size_t r = 0; r < s.rows(); ++r) {
        for (std::size_t i = 0; i < s.cols(); ++i) {
            os << format_double(s.row_axis[r]) << " " << format_double(s.x_axis[i]) << " "
               << format_double(s.at(r, i)) << "\n";
        }
        if (r + 1 < s.rows()) os << "\n";
    }
    if (!os) throw io_error("write failed: " + path);
}

std::pair<Sinogram, Metadata> read_sinogram_csv(const std::string& path) {
    auto is = open_in(path);
    std::string line;
    Metadata meta = read_header(is, line);

    Sinogram s;
    std::vector<double> rows, xs;
    std::vector<double> vals;
    double prev_r = 0.0;
    bool have_r = false;
    auto consume = [&](const std::string& l) {
        if (l.empty()) return;
        std::istringstream ss(l);
        double r, x, v;
        if (!(ss >> r >> x >> v)) throw io_error("malformed sinogram row in " + path);
        if (!have_r || r != prev_r) {
            rows.push_back(r);
            have_r = true;
            prev_r = r;
        }
        if (rows.size() == 1) xs.push_back(x);
        vals.push_back(v);
    };
    consume(line);
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] == '#') continue;
        consume(line);
    }
    s.row_axis = std::move(rows);
    s.x_axis = std::move(xs);
    s.values = std::move(vals);
    if (const std::string* p = meta.find("row_axis")) {
        s.row_kind = (*p == "theta") ? RowAxisKind::angle : RowAxisKind::time;
    }
    if (const std::string* p = meta.find("kind")) {
        s.kind = (*p == "interference") ? SinogramKind::interference : SinogramKind::intensity;
    }
    if (s.values.size() != s.rows() * s.cols())
        throw io_error("inconsistent sinogram shape in " + path);
    return {std::move(s), std::move(meta)};
}

PhaseSpaceField sinogram_as_field(const Sinogram& s) {
    PhaseSpaceField f;
    f.x_axis = s.x_axis;
    f.k_axis = s.row_axis;
    f.provenance = Provenance::analytic;
    f.values.resize(s.values.size());
    // transpose: field is x-major, sinogram is row-major
    for (std::size_t r = 0; r < s.rows(); ++r)
        for (std::size_t i = 0; i < s.cols(); ++i)
            f.values[i * s.rows() + r] = cdouble(s.at(r, i), 0.0);
    return f;
}

} // namespace xwigner
