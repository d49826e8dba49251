/*
 * Copyright 2026 The smartagg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "smartagg/paillier.hpp"

#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "smartagg/error.hpp"

namespace smartagg::paillier {
namespace {

Keypair ToyKey() { return KeypairFromPrimes(5, 7); }

EncodedValue Raw(long v) { return EncodedValue{BigInt(v), 1}; }

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIoError;
}

TEST(PaillierKeygen, ToyPrimesMatchHandComputation) {
  const Keypair kp = ToyKey();
  EXPECT_EQ(kp.pk.n, 35);
  EXPECT_EQ(kp.pk.g, 36);
  EXPECT_EQ(kp.pk.n_squared, 1225);
  EXPECT_EQ(kp.sk.lambda, 12);  // lcm(4, 6)
  EXPECT_EQ(kp.pk.bits, 6u);

  // L(36^12 mod 1225) * mu = 1 (mod 35), with L evaluated by hand.
  const std::uint64_t u = oracle::NaivePowMod(36, 12, 1225);
  const std::uint64_t l = (u - 1) / 35;
  EXPECT_EQ(l * kp.sk.mu.get_ui() % 35, 1u);
}

TEST(PaillierKeygen, RejectsPrimesSharingAFactorWithPhi) {
  // n = 21, (p-1)(q-1) = 12, gcd = 3.
  EXPECT_EQ(CodeOf([] { KeypairFromPrimes(3, 7); }), ErrorCode::kKeygenFailure);
  EXPECT_EQ(CodeOf([] { KeypairFromPrimes(7, 7); }), ErrorCode::kKeygenFailure);
}

TEST(PaillierKeygen, ModulusHasRequestedBitLength) {
  for (unsigned bits : {16u, 64u, 256u, 1024u}) {
    CounterRng rng(Seed256::FromHex("beef"), bits);
    const Keypair kp = GenerateKeypair(bits, rng);
    EXPECT_EQ(mpz_sizeinbase(kp.pk.n.get_mpz_t(), 2), bits);
    EXPECT_EQ(kp.pk.bits, bits);
    EXPECT_EQ(kp.pk.g, kp.pk.n + 1);
  }
}

TEST(PaillierKeygen, DeterministicUnderSeed) {
  CounterRng a(Seed256::FromHex("1"));
  CounterRng b(Seed256::FromHex("1"));
  CounterRng c(Seed256::FromHex("2"));
  const Keypair ka = GenerateKeypair(128, a);
  const Keypair kb = GenerateKeypair(128, b);
  const Keypair kc = GenerateKeypair(128, c);
  EXPECT_EQ(ka.pk, kb.pk);
  EXPECT_EQ(ka.sk, kb.sk);
  EXPECT_NE(ka.pk.n, kc.pk.n);
}

TEST(PaillierKeygen, RejectsOutOfRangeSizes) {
  CounterRng rng(Seed256::FromHex("1"));
  EXPECT_EQ(CodeOf([&] { GenerateKeypair(8, rng); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { GenerateKeypair(4098, rng); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { GenerateKeypair(65, rng); }),
            ErrorCode::kInvalidArgument);
}

TEST(MillerRabin, ClassifiesKnownNumbers) {
  CounterRng rng(Seed256::FromHex("77"));
  for (long p : {2L, 3L, 5L, 997L, 7919L, 2147483647L}) {
    EXPECT_TRUE(IsProbablePrime(p, rng)) << p;
  }
  // 561 and 41041 are Carmichael numbers.
  for (long c : {1L, 4L, 561L, 41041L, 1000001L, 2147483649L}) {
    EXPECT_FALSE(IsProbablePrime(c, rng)) << c;
  }
  BigInt m61 = (BigInt(1) << 61) - 1;
  EXPECT_TRUE(IsProbablePrime(m61, rng));
  EXPECT_FALSE(IsProbablePrime(m61 * 3, rng));
}

TEST(PaillierEncrypt, ZeroWithUnitNonceIsOne) {
  const Keypair kp = ToyKey();
  EXPECT_EQ(EncryptWithNonce(kp.pk, Raw(0), 1).value, 1);
  EXPECT_EQ(Decrypt(kp.pk, kp.sk, Ciphertext{1, 35}, 1).raw, 0);
}

TEST(PaillierEncrypt, SmallModulusMatchesBruteForce) {
  const Keypair kp = ToyKey();
  const Ciphertext c = EncryptWithNonce(kp.pk, Raw(3), 2);
  const std::uint64_t expected = oracle::NaivePowMod(36, 3, 1225) *
                                 oracle::NaivePowMod(2, 35, 1225) % 1225;
  EXPECT_EQ(c.value.get_ui(), expected);
  EXPECT_EQ(Decrypt(kp.pk, kp.sk, c, 1).raw, 3);
  EXPECT_EQ(oracle::BruteForceDecrypt(expected, 35, 36), 3u);
}

TEST(PaillierEncrypt, ExhaustiveRoundTripOnToyKey) {
  const Keypair kp = ToyKey();
  CounterRng rng(Seed256::FromHex("35"));
  for (long m = 0; m < 35; ++m) {
    const Ciphertext c = Encrypt(kp.pk, Raw(m), rng);
    EXPECT_EQ(Decrypt(kp.pk, kp.sk, c, 1).raw, m);
    EXPECT_EQ(oracle::BruteForceDecrypt(c.value.get_ui(), 35, 36),
              static_cast<std::uint64_t>(m));
  }
}

TEST(PaillierEncrypt, RejectsPlaintextOutsideRing) {
  const Keypair kp = ToyKey();
  CounterRng rng(Seed256::FromHex("1"));
  EXPECT_EQ(CodeOf([&] { Encrypt(kp.pk, Raw(35), rng); }),
            ErrorCode::kPlaintextOutOfRange);
  EXPECT_EQ(CodeOf([&] { Encrypt(kp.pk, Raw(-1), rng); }),
            ErrorCode::kPlaintextOutOfRange);
  EXPECT_EQ(CodeOf([&] { EncryptWithNonce(kp.pk, Raw(1), 7); }),
            ErrorCode::kInvalidArgument);
}

TEST(PaillierEncrypt, ProbabilisticAtRealisticKeySize) {
  CounterRng keys(Seed256::FromHex("51"));
  const Keypair kp = GenerateKeypair(512, keys);
  CounterRng rng(Seed256::FromHex("52"));
  const EncodedValue m{BigInt(4242), 1};
  std::set<std::string> seen;
  for (int i = 0; i < 100; ++i) {
    const Ciphertext c = Encrypt(kp.pk, m, rng);
    EXPECT_TRUE(seen.insert(c.value.get_str(16)).second);
    EXPECT_EQ(Decrypt(kp.pk, kp.sk, c, 1).raw, 4242);
  }
}

TEST(PaillierDecrypt, RejectsElementsOutsideTheGroup) {
  const Keypair kp = ToyKey();
  for (long bad : {0L, 7L, 1225L, 2000L}) {
    EXPECT_EQ(CodeOf([&] { Decrypt(kp.pk, kp.sk, Ciphertext{bad, 35}); }),
              ErrorCode::kMalformedCiphertext)
        << bad;
  }
  EXPECT_EQ(CodeOf([&] { Decrypt(kp.pk, kp.sk, Ciphertext{1, 77}); }),
            ErrorCode::kDomainMismatch);
}

TEST(PaillierDecrypt, RandomRoundTripsAt1024Bits) {
  CounterRng keys(Seed256::FromHex("1024"));
  const Keypair kp = GenerateKeypair(1024, keys);
  CounterRng rng(Seed256::FromHex("abc"));
  for (int i = 0; i < 100; ++i) {
    const EncodedValue m{RandomBelow(kp.pk.n, rng), 1};
    EXPECT_EQ(Decrypt(kp.pk, kp.sk, Encrypt(kp.pk, m, rng), 1).raw, m.raw);
  }
}

TEST(PaillierAdd, SmallModulusSums) {
  const Keypair kp = ToyKey();
  CounterRng rng(Seed256::FromHex("9"));
  auto enc = [&](long m) { return Encrypt(kp.pk, Raw(m), rng); };
  EXPECT_EQ(Decrypt(kp.pk, kp.sk, Add(kp.pk, enc(3), enc(4)), 1).raw, 7);
  EXPECT_EQ(Decrypt(kp.pk, kp.sk, Add(kp.pk, enc(20), enc(20)), 1).raw, 5);
  const Ciphertext c = enc(11);
  EXPECT_EQ(Decrypt(kp.pk, kp.sk, Add(kp.pk, c, enc(0)), 1).raw, 11);
}

TEST(PaillierAdd, RejectsMixedKeys) {
  const Keypair a = ToyKey();
  const Keypair b = KeypairFromPrimes(11, 13);
  EXPECT_EQ(CodeOf([&] {
              Add(a.pk, Identity(a.pk), Identity(b.pk));
            }),
            ErrorCode::kDomainMismatch);
}

TEST(PaillierAdd, KFoldEqualsPlainSumModN) {
  CounterRng keys(Seed256::FromHex("256"));
  const Keypair kp = GenerateKeypair(256, keys);
  CounterRng rng(Seed256::FromHex("f01d"));
  std::vector<Ciphertext> terms;
  BigInt plain = 0;
  for (int k = 0; k < 100; ++k) {
    const BigInt m = RandomBelow(kp.pk.n, rng);
    plain += m;
    terms.push_back(Encrypt(kp.pk, EncodedValue{m, 1}, rng));
  }
  EXPECT_EQ(Decrypt(kp.pk, kp.sk, Sum(kp.pk, terms), 1).raw, plain % kp.pk.n);
  EXPECT_EQ(Decrypt(kp.pk, kp.sk, Sum(kp.pk, {}), 1).raw, 0);
}

TEST(SignedCodec, PaperScaleExamples) {
  const Keypair big = KeypairFromPrimes(1000003, 1000033);
  EXPECT_EQ(EncodeSigned(1.5, 1000, big.pk).raw, 1500);
  EXPECT_DOUBLE_EQ(DecodeSigned(EncodedValue{1500, 1000}, big.pk), 1.5);

  const Keypair toy = ToyKey();
  EXPECT_EQ(EncodeSigned(-2, 1, toy.pk).raw, 33);
  EXPECT_DOUBLE_EQ(DecodeSigned(EncodedValue{33, 1}, toy.pk), -2.0);
}

TEST(SignedCodec, HalfRangeBoundary) {
  const Keypair toy = ToyKey();
  EXPECT_EQ(EncodeSigned(17, 1, toy.pk).raw, 17);
  EXPECT_EQ(EncodeSigned(-17, 1, toy.pk).raw, 18);
  EXPECT_DOUBLE_EQ(DecodeSigned(EncodedValue{18, 1}, toy.pk), -17.0);
  EXPECT_EQ(CodeOf([&] { EncodeSigned(18, 1, toy.pk); }),
            ErrorCode::kEncodingOverflow);
  EXPECT_EQ(CodeOf([&] { EncodeSigned(-18, 1, toy.pk); }),
            ErrorCode::kEncodingOverflow);
  EXPECT_EQ(CodeOf([&] { EncodeSigned(std::nan(""), 1, toy.pk); }),
            ErrorCode::kEncodingOverflow);
}

TEST(SignedCodec, RoundTripProperty) {
  CounterRng keys(Seed256::FromHex("c0de"));
  const Keypair kp = GenerateKeypair(128, keys);
  CounterRng rng(Seed256::FromHex("c0dec"));
  for (int i = 0; i < 10000; ++i) {
    // x has at most three decimals, so it is exactly scale-representable.
    const std::int64_t units =
        static_cast<std::int64_t>(rng.UniformBelow(2'000'000'001)) -
        1'000'000'000;
    const double x = static_cast<double>(units) / 1000.0;
    const EncodedValue v = EncodeSigned(x, 1000, kp.pk);
    ASSERT_LT(v.raw, kp.pk.n);
    ASSERT_EQ(DecodeUnits(v, kp.pk), units);
    ASSERT_DOUBLE_EQ(DecodeSigned(v, kp.pk), x);
  }
}

TEST(SignedCodec, HomomorphicSumOfSignedValues) {
  CounterRng keys(Seed256::FromHex("5a"));
  const Keypair kp = GenerateKeypair(256, keys);
  CounterRng rng(Seed256::FromHex("5b"));
  std::int64_t plain = 0;
  Ciphertext acc = Identity(kp.pk);
  for (int i = 0; i < 50; ++i) {
    const std::int64_t units =
        static_cast<std::int64_t>(rng.UniformBelow(20001)) - 10000;
    plain += units;
    acc = Add(kp.pk, acc,
              Encrypt(kp.pk, EncodeUnits(units, 1000, kp.pk), rng));
  }
  EXPECT_EQ(DecodeUnits(Decrypt(kp.pk, kp.sk, acc), kp.pk), plain);
}

TEST(Serialization, KeysAndCiphertextsSurviveTheWire) {
  CounterRng keys(Seed256::FromHex("5e"));
  const Keypair kp = GenerateKeypair(256, keys);
  const Bytes pk_bytes = SerializePublicKey(kp.pk);
  EXPECT_EQ(pk_bytes[3], 0);  // u32 bits = 256 -> 00 00 01 00
  EXPECT_EQ(pk_bytes[2], 1);
  EXPECT_EQ(ParsePublicKey(HexDecode(HexEncode(pk_bytes))), kp.pk);
  EXPECT_EQ(ParseSecretKey(SerializeSecretKey(kp.sk)), kp.sk);

  CounterRng rng(Seed256::FromHex("5f"));
  const Ciphertext c = Encrypt(kp.pk, EncodedValue{12345, 1}, rng);
  const Bytes cb = SerializeCiphertext(kp.pk, c);
  EXPECT_EQ(cb.size(), CiphertextBytes(kp.pk));
  EXPECT_EQ(cb.size(), 64u);
  EXPECT_EQ(ParseCiphertext(kp.pk, cb), c);
}

TEST(Serialization, RejectsDamagedInput) {
  const Keypair kp = ToyKey();
  Bytes pk_bytes = SerializePublicKey(kp.pk);
  pk_bytes.pop_back();
  EXPECT_EQ(CodeOf([&] { ParsePublicKey(pk_bytes); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { HexDecode("abc"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { HexDecode("zz"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { ParseCiphertext(kp.pk, Bytes{0x00}); }),
            ErrorCode::kMalformedCiphertext);
}

}  // namespace
}  // namespace smartagg::paillier
