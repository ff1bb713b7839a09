#include "flyatom/output.hpp"

#include "flyatom/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace flyatom {

namespace fs = std::filesystem;

std::string format_double(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read '" + path.string() + "' for checksumming");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 initialization failed");
    std::array<char, 1 << 16> chunk{};
    while (in) {
        in.read(chunk.data(), chunk.size());
        if (in.gcount() > 0)
            EVP_DigestUpdate(ctx.get(), chunk.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

OutputFile inventory_entry(const fs::path& root, const fs::path& file) {
    OutputFile entry;
    entry.path = fs::relative(file, root).generic_string();
    entry.sha256 = sha256_file(file);
    entry.bytes = fs::file_size(file);
    return entry;
}

void write_text(const fs::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << text;
        out.flush();
        if (!out)
            throw IoError("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

std::string time_series_csv(const std::vector<TimeSeriesRecord>& records, const std::vector<std::string>& columns) {
    std::vector<int> index;
    for (const auto& c : columns)
        index.push_back(observable_index(c));
    std::ostringstream out;
    out << "step,t";
    for (const auto& c : columns)
        out << ',' << c;
    out << '\n';
    for (const auto& r : records) {
        out << r.step << ',' << format_double(r.t);
        for (int i : index)
            out << ',' << format_double(r.values[i]);
        out << '\n';
    }
    return out.str();
}

std::string snapshot_text(const WavepacketState& state, const Grid& grid, const HilbertDims& dims) {
    std::ostringstream out;
    out << 'x';
    for (int r = 0; r < state.dim(); ++r) {
        const BareLabel l = dims.label(r);
        const std::string name = std::string(l.spin == Spin::g ? "g" : "e") + std::to_string(l.photons);
        out << " re_" << name << " im_" << name;
    }
    out << '\n';
    for (int j = 0; j < state.points(); ++j) {
        out << format_double(grid.x(j));
        for (int r = 0; r < state.dim(); ++r)
            out << ' ' << format_double(state(j, r).real()) << ' ' << format_double(state(j, r).imag());
        out << '\n';
    }
    return out.str();
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read '" + path.string() + "'");
    CsvTable table;
    std::string line;
    if (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            table.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ','))
            row.push_back(std::stod(cell));
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace flyatom
