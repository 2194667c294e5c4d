#include "lrt/gridfile.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "lrt/version.hpp"

namespace lrt {

static_assert(std::endian::native == std::endian::little,
              "grid file payloads are little-endian; big-endian hosts are not supported");

void GridFile::validate() const {
    if (dtype != "f64" && dtype != "c128")
        throw FormatError("grid file: dtype must be f64 or c128, got '" + dtype + "'");
    if (field_kind.empty()) throw FormatError("grid file: field_kind must be non-empty");
    if (components < 1) throw FormatError("grid file: components must be >= 1");
    if (axes.empty()) throw FormatError("grid file: need at least one axis");
    for (const auto& a : axes) a.validate();
    if (data.size() != expected_len()) {
        std::ostringstream os;
        os << "grid file: payload holds " << data.size() << " doubles but dims/components imply "
           << expected_len();
        throw FormatError(os.str());
    }
}

static std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void GridFile::write(const std::string& path) const {
    validate();

    std::ostringstream meta;
    meta << "gridfile: 1\n";
    meta << "creator: " << kCreator << "\n";
    meta << "dtype: " << dtype << "\n";
    meta << "field_kind: " << field_kind << "\n";
    meta << "components: " << components << "\n";
    meta << "dims:";
    for (const auto& a : axes) meta << " " << a.n;
    meta << "\n";
    for (const auto& a : axes)
        meta << "axis: " << a.name << " " << fmt_double(a.lo) << " " << fmt_double(a.hi) << "\n";

    std::ofstream mf(path + ".meta", std::ios::binary | std::ios::trunc);
    if (!mf) throw FormatError("grid file: cannot open '" + path + ".meta' for writing");
    mf << meta.str();
    if (!mf.flush()) throw FormatError("grid file: short write to '" + path + ".meta'");

    std::ofstream bf(path, std::ios::binary | std::ios::trunc);
    if (!bf) throw FormatError("grid file: cannot open '" + path + "' for writing");
    bf.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!bf.flush()) throw FormatError("grid file: short write to '" + path + "'");
}

namespace {

struct MetaLine {
    std::string key, value;
    int lineno;
};

std::vector<MetaLine> parse_meta(const std::string& path) {
    std::ifstream mf(path, std::ios::binary);
    if (!mf) throw FormatError("grid file: missing sidecar '" + path + "'");
    std::vector<MetaLine> out;
    std::string line;
    int lineno = 0;
    while (std::getline(mf, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw FormatError("grid file: " + path + " line " + std::to_string(lineno) +
                              ": expected 'key: value'");
        std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        while (!value.empty() && value.front() == ' ') value.erase(value.begin());
        out.push_back({key, value, lineno});
    }
    return out;
}

double parse_num(const std::string& tok, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw FormatError("grid file: " + ctx + ": bad number '" + tok + "'");
    }
}

}  // namespace

GridFile GridFile::read(const std::string& path) {
    GridFile g;
    g.axes.clear();

    std::vector<int> dims;
    std::vector<std::string> axis_lines;
    bool saw_version = false, saw_dtype = false, saw_kind = false, saw_comp = false,
         saw_dims = false;

    for (const auto& ml : parse_meta(path + ".meta")) {
        const std::string ctx = path + ".meta line " + std::to_string(ml.lineno);
        if (ml.key == "gridfile") {
            if (ml.value != "1") throw FormatError("grid file: " + ctx + ": unsupported version '" + ml.value + "'");
            saw_version = true;
        } else if (ml.key == "creator") {
            // informational only
        } else if (ml.key == "dtype") {
            g.dtype = ml.value;
            saw_dtype = true;
        } else if (ml.key == "field_kind") {
            g.field_kind = ml.value;
            saw_kind = true;
        } else if (ml.key == "components") {
            g.components = static_cast<int>(parse_num(ml.value, ctx));
            saw_comp = true;
        } else if (ml.key == "dims") {
            std::istringstream is(ml.value);
            std::string tok;
            while (is >> tok) dims.push_back(static_cast<int>(parse_num(tok, ctx)));
            saw_dims = true;
        } else if (ml.key == "axis") {
            axis_lines.push_back(ml.value);
        } else {
            throw FormatError("grid file: " + ctx + ": unknown key '" + ml.key + "'");
        }
    }
    if (!saw_version) throw FormatError("grid file: " + path + ".meta: missing 'gridfile' version line");
    if (!saw_dtype) throw FormatError("grid file: " + path + ".meta: missing 'dtype'");
    if (!saw_kind) throw FormatError("grid file: " + path + ".meta: missing 'field_kind'");
    if (!saw_comp) throw FormatError("grid file: " + path + ".meta: missing 'components'");
    if (!saw_dims) throw FormatError("grid file: " + path + ".meta: missing 'dims'");
    if (dims.empty()) throw FormatError("grid file: " + path + ".meta: 'dims' lists no extents");
    if (axis_lines.size() != dims.size())
        throw FormatError("grid file: " + path + ".meta: " + std::to_string(dims.size()) +
                          " dims but " + std::to_string(axis_lines.size()) + " axis lines");

    for (std::size_t d = 0; d < dims.size(); ++d) {
        std::istringstream is(axis_lines[d]);
        std::string name, lotok, hitok, extra;
        if (!(is >> name >> lotok >> hitok) || (is >> extra))
            throw FormatError("grid file: " + path + ".meta: axis line '" + axis_lines[d] +
                              "' must be '<name> <min> <max>'");
        const std::string ctx = path + ".meta axis '" + name + "'";
        g.axes.push_back(make_axis(name, parse_num(lotok, ctx), parse_num(hitok, ctx), dims[d]));
    }

    std::ifstream bf(path, std::ios::binary | std::ios::ate);
    if (!bf) throw FormatError("grid file: missing payload '" + path + "'");
    const auto actual_bytes = static_cast<std::uint64_t>(bf.tellg());
    const std::uint64_t want_bytes = static_cast<std::uint64_t>(g.expected_len()) * sizeof(double);
    if (actual_bytes != want_bytes) {
        std::ostringstream os;
        os << "grid file: payload '" << path << "' is " << actual_bytes << " bytes, expected "
           << want_bytes << " (dims/components from sidecar)";
        throw FormatError(os.str());
    }
    g.data.resize(g.expected_len());
    bf.seekg(0);
    bf.read(reinterpret_cast<char*>(g.data.data()), static_cast<std::streamsize>(want_bytes));
    if (!bf) throw FormatError("grid file: short read from '" + path + "'");

    g.validate();
    return g;
}

}  // namespace lrt
