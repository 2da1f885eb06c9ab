#include <catch2/catch_amalgamated.hpp>

#include <lineture/bitlin.hpp>

using namespace lineture;

// Reference digests cross-checked against an independent implementation
// (Python hashlib, FIPS-202 conformant).

TEST_CASE("sha3-256 matches reference vectors", "[hash]") {
    CHECK(to_hex(sha3_256(as_bytes(""))) ==
          "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a");
    CHECK(to_hex(sha3_256(as_bytes("abc"))) ==
          "3a985da74fe225b2045c172d6bd390bd855f086e3e9d525b46bfe24511431532");
}

TEST_CASE("sha3-256 over parts equals sha3-256 over the concatenation", "[hash]") {
    auto joined = sha3_256(as_bytes("abcdef"));
    auto split = sha3_256({as_bytes("abc"), as_bytes("def")});
    CHECK(joined == split);
}

TEST_CASE("shake-256 matches reference vectors", "[hash]") {
    Shake256 empty;
    CHECK(to_hex(empty.read(32)) ==
          "46b9dd2b0ba88d13233b3feb743eeb243fcd52ea62b81b82b50c27646ed5762f");

    Shake256 abc;
    abc.absorb("abc");
    CHECK(to_hex(abc.read(16)) == "483366601360a8771c6863080cc4114d");
}

TEST_CASE("shake-256 agrees with the reference at large offsets", "[hash]") {
    // hashlib: shake_256(b"offset-test").digest(100000)
    Shake256 x;
    x.absorb("offset-test");
    CHECK(to_hex(x.read(8)) == "a061ca863fee3259");
    (void)x.read(100000 - 8 - 10);
    CHECK(to_hex(x.read(10)) == "6f1370abfcf280c19f7b");
}

TEST_CASE("shake-256 incremental reads equal the one-shot prefix", "[hash]") {
    Shake256 oneshot;
    oneshot.absorb("incremental-check");
    Bytes expect = oneshot.read(300);

    Shake256 inc;
    inc.absorb("incremental-check");
    Bytes got;
    for (size_t n : {1u, 2u, 7u, 40u, 250u}) {
        Bytes part = inc.read(n);
        got.insert(got.end(), part.begin(), part.end());
    }
    CHECK(std::equal(got.begin(), got.end(), expect.begin()));
}

TEST_CASE("shake-256 rejects absorb after read", "[hash]") {
    Shake256 x;
    x.absorb("a");
    (void)x.read(1);
    CHECK_THROWS_AS(x.absorb("b"), std::logic_error);
}

TEST_CASE("seeded byte streams replay exactly", "[hash][stream]") {
    auto a = ByteStream::seeded("TAG", as_bytes("payload"));
    auto b = ByteStream::seeded("TAG", as_bytes("payload"));
    for (int i = 0; i < 500; ++i) {
        REQUIRE(a.next() == b.next());
    }

    auto c = ByteStream::seeded("TAG", as_bytes("other"));
    auto d = ByteStream::seeded("GAT", as_bytes("payload"));
    Bytes b1(16), b2(16), b3(16);
    ByteStream::seeded("TAG", as_bytes("payload")).fill(b1);
    c.fill(b2);
    d.fill(b3);
    CHECK(b1 != b2);
    CHECK(b1 != b3);
}

TEST_CASE("fixed byte streams replay their buffer and then fail", "[stream]") {
    auto s = ByteStream::fixed({1, 2, 3});
    CHECK(s.next() == 1);
    CHECK(s.next() == 2);
    CHECK(s.next() == 3);
    CHECK_THROWS_AS(s.next(), StreamExhausted);
}

TEST_CASE("next_below is uniform-capable and in range", "[stream]") {
    auto s = ByteStream::seeded("range-check");
    for (int i = 0; i < 1000; ++i) {
        CHECK(s.next_below(6) < 6);
    }
    CHECK_THROWS_AS(s.next_below(0), std::invalid_argument);
    CHECK_THROWS_AS(s.next_below(257), std::invalid_argument);
}

TEST_CASE("hex helpers round-trip", "[hash]") {
    Bytes data{0x00, 0x7f, 0x80, 0xff, 0x12};
    CHECK(from_hex(to_hex(data)) == data);
    CHECK_THROWS_AS(from_hex("abc"), std::invalid_argument);
    CHECK_THROWS_AS(from_hex("zz"), std::invalid_argument);
}
