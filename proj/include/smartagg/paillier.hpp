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

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smartagg/random.hpp"

namespace smartagg::paillier {

using BigInt = mpz_class;
using Bytes = std::vector<std::uint8_t>;

struct PublicKey {
  unsigned bits = 0;
  BigInt n;
  BigInt g;
  BigInt n_squared;

  /// Builds a key from its modulus and generator, caching n^2.
  static PublicKey Make(const BigInt& n, const BigInt& g);
  friend bool operator==(const PublicKey& a, const PublicKey& b) {
    return a.bits == b.bits && a.n == b.n && a.g == b.g;
  }
};

struct SecretKey {
  BigInt lambda;
  BigInt mu;
  friend bool operator==(const SecretKey& a, const SecretKey& b) {
    return a.lambda == b.lambda && a.mu == b.mu;
  }
};

struct Keypair {
  PublicKey pk;
  SecretKey sk;
};

/// Element of (Z/n^2)^*, tagged with the modulus n of the key that made it.
struct Ciphertext {
  BigInt value;
  BigInt n;
  friend bool operator==(const Ciphertext& a, const Ciphertext& b) {
    return a.value == b.value && a.n == b.n;
  }
};

/// Ring element in [0, n) carrying a fixed-point scale (units per kWh).
/// The upper half of the ring represents negative values.
struct EncodedValue {
  BigInt raw;
  std::uint64_t scale = 1;
};

inline constexpr std::uint64_t kDefaultScale = 1000;
inline constexpr int kMillerRabinRounds = 64;

// L(x) = (x - 1) / n, exact division.
BigInt L(const BigInt& x, const BigInt& n);

BigInt RandomBits(unsigned bits, CounterRng& rng);
/// Uniform in [0, bound).
BigInt RandomBelow(const BigInt& bound, CounterRng& rng);
bool IsProbablePrime(const BigInt& candidate, CounterRng& rng,
                     int rounds = kMillerRabinRounds);

/// Fresh keypair whose modulus has exactly `bits` bits. Deterministic in the
/// state of `rng`. Throws kKeygenFailure when no suitable primes are found
/// within the retry budget.
Keypair GenerateKeypair(unsigned bits, CounterRng& rng);

/// Keypair from caller-chosen primes (tests and toy examples).
Keypair KeypairFromPrimes(const BigInt& p, const BigInt& q);

Ciphertext Encrypt(const PublicKey& pk, const EncodedValue& m, CounterRng& rng);
/// Encryption with an explicit nonce r, 0 < r < n, gcd(r, n) = 1.
Ciphertext EncryptWithNonce(const PublicKey& pk, const EncodedValue& m,
                            const BigInt& r);
/// Decrypts to the raw ring element; the returned scale is `scale`.
EncodedValue Decrypt(const PublicKey& pk, const SecretKey& sk,
                     const Ciphertext& c,
                     std::uint64_t scale = kDefaultScale);

/// Homomorphic addition: Dec(Add(a, b)) = Dec(a) + Dec(b) mod n.
Ciphertext Add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b);
/// The deterministic encryption of zero (value 1); identity for Add.
Ciphertext Identity(const PublicKey& pk);
/// Folds Add over `terms`; the empty fold is Identity(pk).
Ciphertext Sum(const PublicKey& pk, std::span<const Ciphertext> terms);

/// Throws kDomainMismatch unless `c` was produced under `pk`, and
/// kMalformedCiphertext unless it is a unit in [1, n^2).
void CheckCiphertext(const PublicKey& pk, const Ciphertext& c);

// Signed fixed-point codec.
EncodedValue EncodeSigned(double kwh, std::uint64_t scale, const PublicKey& pk);
/// Encodes an integer count of fixed-point units (may be negative).
EncodedValue EncodeUnits(const BigInt& units, std::uint64_t scale,
                         const PublicKey& pk);
double DecodeSigned(const EncodedValue& v, const PublicKey& pk);
BigInt DecodeUnits(const EncodedValue& v, const PublicKey& pk);
/// round(kwh * scale) as an exact integer. Throws on non-finite input.
BigInt ToUnits(double kwh, std::uint64_t scale);

// Wire layout. Integers are big-endian magnitudes; length prefixes are u32.
Bytes SerializePublicKey(const PublicKey& pk);   // [u32 bits][len|n][len|g]
PublicKey ParsePublicKey(std::span<const std::uint8_t> bytes);
Bytes SerializeSecretKey(const SecretKey& sk);   // [len|lambda][len|mu]
SecretKey ParseSecretKey(std::span<const std::uint8_t> bytes);
/// Ciphertext magnitude, left-padded to the byte width of n^2.
Bytes SerializeCiphertext(const PublicKey& pk, const Ciphertext& c);
Ciphertext ParseCiphertext(const PublicKey& pk,
                           std::span<const std::uint8_t> bytes);
std::size_t CiphertextBytes(const PublicKey& pk);

Bytes ToBytes(const BigInt& v);
BigInt FromBytes(std::span<const std::uint8_t> bytes);
std::string HexEncode(std::span<const std::uint8_t> bytes);
Bytes HexDecode(std::string_view hex);

}  // namespace smartagg::paillier
