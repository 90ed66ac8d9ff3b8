#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "etn/io.hpp"
#include "etn/tensor.hpp"
#include "test_util.hpp"

using etn::DenseTensor;
using etn::Error;
using etn::ErrorCode;
using etn::Shape;
using etn_test::Uniform;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "etn_io_test";
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("TNS-JSON round-trips values and dims") {
    Uniform rng(701);
    DenseTensor t = rng.tensor({3, 4, 2});
    const std::string text = etn::to_tns_json(t);
    DenseTensor back = etn::from_tns_json(text);
    CHECK(back.shape() == t.shape());
    CHECK(etn_test::bit_equal(back, t));
}

TEST_CASE("TNS-JSON rejects malformed input") {
    CHECK_THROWS_AS(etn::from_tns_json("not json"), Error);
    CHECK_THROWS_AS(etn::from_tns_json("{\"dims\":[2,2]}"), Error);
    CHECK_THROWS_AS(etn::from_tns_json("{\"dims\":[2,2],\"data\":[1.0]}"), Error);
    try {
        etn::from_tns_json("[]");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
}

TEST_CASE("binary format round-trips bit for bit") {
    TempDir dir;
    Uniform rng(702);
    DenseTensor t = rng.tensor({5, 3, 2, 2});
    // include values that stress the encoding
    t[0] = 0.1;
    t[1] = -0.0;
    t[2] = 1e-308;
    const std::string path = dir.file("payload.tns");
    etn::save_tns_binary(t, path);
    DenseTensor back = etn::load_tns_binary(path);
    CHECK(back.shape() == t.shape());
    CHECK(etn_test::bit_equal(back, t));
}

TEST_CASE("binary loader rejects corrupt files") {
    TempDir dir;
    const std::string bad_magic = dir.file("bad.tns");
    {
        std::ofstream os(bad_magic, std::ios::binary);
        os << "NOPE";
    }
    CHECK_THROWS_AS(etn::load_tns_binary(bad_magic), Error);

    Uniform rng(703);
    DenseTensor t = rng.tensor({4, 4});
    const std::string truncated = dir.file("short.tns");
    etn::save_tns_binary(t, truncated);
    std::filesystem::resize_file(truncated, 40);
    CHECK_THROWS_AS(etn::load_tns_binary(truncated), Error);

    CHECK_THROWS_AS(etn::load_tns_binary(dir.file("missing.tns")), Error);
}

TEST_CASE("extension dispatch picks the format") {
    TempDir dir;
    Uniform rng(704);
    DenseTensor t = rng.tensor({2, 3});

    const std::string as_json = dir.file("t.json");
    etn::save_tensor(t, as_json);
    {
        std::ifstream is(as_json);
        std::string first_line;
        std::getline(is, first_line);
        CHECK(first_line.find("\"dims\"") != std::string::npos);
    }
    CHECK(etn_test::bit_equal(etn::load_tensor(as_json), t));

    const std::string as_bin = dir.file("t.tns");
    etn::save_tensor(t, as_bin);
    {
        std::ifstream is(as_bin, std::ios::binary);
        char magic[4];
        is.read(magic, 4);
        CHECK(std::string(magic, 4) == "TNS1");
    }
    CHECK(etn_test::bit_equal(etn::load_tensor(as_bin), t));
}

TEST_CASE("repeated saves are byte-identical") {
    TempDir dir;
    Uniform rng(705);
    DenseTensor t = rng.tensor({4, 4});
    const std::string p1 = dir.file("a.tns");
    const std::string p2 = dir.file("b.tns");
    etn::save_tensor(t, p1);
    etn::save_tensor(t, p2);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);

    const std::string j1 = dir.file("a.json");
    const std::string j2 = dir.file("b.json");
    etn::save_tensor(t, j1);
    etn::save_tensor(t, j2);
    std::ifstream g1(j1), g2(j2);
    std::string u1((std::istreambuf_iterator<char>(g1)), std::istreambuf_iterator<char>());
    std::string u2((std::istreambuf_iterator<char>(g2)), std::istreambuf_iterator<char>());
    CHECK(u1 == u2);
}
