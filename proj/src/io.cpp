#include "etn/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace etn {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'T', 'N', 'S', '1'};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <typename T>
void write_le(std::ostream& os, T value) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        buf[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xff);
    }
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
    unsigned char buf[sizeof(T)];
    is.read(reinterpret_cast<char*>(buf), sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<T>(buf[i]) << (8 * i);
    }
    return value;
}

} // namespace

std::string to_tns_json(const DenseTensor& t) {
    json j;
    j["dims"] = t.shape().dims();
    j["data"] = t.data();
    return j.dump();
}

DenseTensor from_tns_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("invalid TNS-JSON: ") + e.what());
    }
    if (!j.contains("dims") || !j.contains("data")) {
        throw Error(ErrorCode::IoError, "TNS-JSON requires dims and data fields");
    }
    std::vector<std::size_t> dims = j["dims"].get<std::vector<std::size_t>>();
    std::vector<double> data = j["data"].get<std::vector<double>>();
    return DenseTensor(Shape(std::move(dims)), std::move(data));
}

void save_tns_json(const DenseTensor& t, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    os << to_tns_json(t) << "\n";
}

DenseTensor load_tns_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return from_tns_json(buf.str());
}

void save_tns_binary(const DenseTensor& t, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    os.write(kMagic, 4);
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(t.order()));
    for (std::size_t d : t.shape().dims()) {
        write_le<std::uint64_t>(os, static_cast<std::uint64_t>(d));
    }
    for (double v : t.data()) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        write_le<std::uint64_t>(os, bits);
    }
    if (!os) throw Error(ErrorCode::IoError, "write failed for " + path);
}

DenseTensor load_tns_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) {
        throw Error(ErrorCode::IoError, "bad magic in " + path);
    }
    const std::uint32_t order = read_le<std::uint32_t>(is);
    if (order == 0 || order > 64) {
        throw Error(ErrorCode::IoError, "implausible tensor order in " + path);
    }
    std::vector<std::size_t> dims(order);
    for (auto& d : dims) d = static_cast<std::size_t>(read_le<std::uint64_t>(is));
    Shape shape(std::move(dims));
    std::vector<double> data(shape.size());
    for (double& v : data) {
        const std::uint64_t bits = read_le<std::uint64_t>(is);
        std::memcpy(&v, &bits, sizeof(v));
    }
    if (!is) throw Error(ErrorCode::IoError, "truncated tensor file " + path);
    return DenseTensor(std::move(shape), std::move(data));
}

void save_tensor(const DenseTensor& t, const std::string& path) {
    if (ends_with(path, ".tns")) {
        save_tns_binary(t, path);
    } else {
        save_tns_json(t, path);
    }
}

DenseTensor load_tensor(const std::string& path) {
    if (ends_with(path, ".tns")) {
        return load_tns_binary(path);
    }
    return load_tns_json(path);
}

} // namespace etn
