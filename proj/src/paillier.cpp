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

#include <cmath>

#include "smartagg/error.hpp"

namespace smartagg::paillier {
namespace {

constexpr int kPrimeSearchAttempts = 200000;
constexpr int kKeygenAttempts = 64;

// Odd primes below 1000 for trial division.
const std::vector<unsigned long>& SmallPrimes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<unsigned long> out;
    for (unsigned long c = 3; c < 1000; c += 2) {
      bool prime = true;
      for (unsigned long d = 3; d * d <= c; d += 2) {
        if (c % d == 0) {
          prime = false;
          break;
        }
      }
      if (prime) out.push_back(c);
    }
    return out;
  }();
  return primes;
}

BigInt Lcm(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

BigInt Gcd(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

BigInt PowMod(const BigInt& base, const BigInt& exp, const BigInt& mod) {
  BigInt out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           mod.get_mpz_t());
  return out;
}

bool Invert(BigInt& out, const BigInt& a, const BigInt& mod) {
  return mpz_invert(out.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()) != 0;
}

unsigned BitLength(const BigInt& v) {
  return v == 0 ? 0 : static_cast<unsigned>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

// Prime with exactly `bits` bits and its top two bits set, so the product of
// two such primes has exactly 2*bits bits.
BigInt RandomPrime(unsigned bits, CounterRng& rng) {
  for (int attempt = 0; attempt < kPrimeSearchAttempts; ++attempt) {
    BigInt candidate = RandomBits(bits, rng);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (IsProbablePrime(candidate, rng)) return candidate;
  }
  throw Error(ErrorCode::kKeygenFailure,
              "no " + std::to_string(bits) + "-bit prime found");
}

void PutU32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_++];
    return v;
  }

  BigInt Integer() {
    const std::uint32_t len = U32();
    Need(len);
    BigInt v = FromBytes(bytes_.subspan(pos_, len));
    pos_ += len;
    return v;
  }

  void ExpectEnd() const {
    if (pos_ != bytes_.size()) {
      throw Error(ErrorCode::kParseError, "trailing bytes in key encoding");
    }
  }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::kParseError, "truncated key encoding");
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void PutInteger(Bytes& out, const BigInt& v) {
  Bytes mag = ToBytes(v);
  PutU32(out, static_cast<std::uint32_t>(mag.size()));
  out.insert(out.end(), mag.begin(), mag.end());
}

}  // namespace

PublicKey PublicKey::Make(const BigInt& n, const BigInt& g) {
  PublicKey pk;
  pk.bits = BitLength(n);
  pk.n = n;
  pk.g = g;
  pk.n_squared = n * n;
  return pk;
}

BigInt L(const BigInt& x, const BigInt& n) {
  BigInt out = x - 1;
  mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), n.get_mpz_t());
  return out;
}

BigInt RandomBits(unsigned bits, CounterRng& rng) {
  BigInt out = 0;
  unsigned remaining = bits;
  while (remaining > 0) {
    const unsigned take = remaining < 64 ? remaining : 64;
    std::uint64_t w = rng.NextU64();
    if (take < 64) w &= (std::uint64_t{1} << take) - 1;
    out <<= take;
    // mpz_class has no uint64 constructor on every platform; go via two halves.
    out += BigInt(static_cast<unsigned long>(w >> 32)) << 32;
    out += BigInt(static_cast<unsigned long>(w & 0xffffffffULL));
    remaining -= take;
  }
  return out;
}

BigInt RandomBelow(const BigInt& bound, CounterRng& rng) {
  if (bound <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "RandomBelow bound must be > 0");
  }
  const unsigned bits = BitLength(bound);
  BigInt v;
  do {
    v = RandomBits(bits, rng);
  } while (v >= bound);
  return v;
}

bool IsProbablePrime(const BigInt& candidate, CounterRng& rng, int rounds) {
  if (candidate < 2) return false;
  if (candidate < 4) return true;
  if (mpz_even_p(candidate.get_mpz_t())) return false;
  for (unsigned long p : SmallPrimes()) {
    if (candidate == p) return true;
    if (mpz_divisible_ui_p(candidate.get_mpz_t(), p)) return false;
  }

  // candidate - 1 = d * 2^s with d odd.
  const BigInt minus_one = candidate - 1;
  BigInt d = minus_one;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  const BigInt witness_span = candidate - 3;  // witnesses in [2, n-2]
  for (int i = 0; i < rounds; ++i) {
    const BigInt a = RandomBelow(witness_span, rng) + 2;
    BigInt x = PowMod(a, d, candidate);
    if (x == 1 || x == minus_one) continue;
    bool composite = true;
    for (unsigned long r = 1; r < s; ++r) {
      x = x * x % candidate;
      if (x == minus_one) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Keypair KeypairFromPrimes(const BigInt& p, const BigInt& q) {
  if (p == q || p < 3 || q < 3) {
    throw Error(ErrorCode::kKeygenFailure, "primes must be distinct and odd");
  }
  const BigInt n = p * q;
  const BigInt phi = (p - 1) * (q - 1);
  if (Gcd(n, phi) != 1) {
    throw Error(ErrorCode::kKeygenFailure, "gcd(pq, (p-1)(q-1)) != 1");
  }
  Keypair kp;
  kp.pk = PublicKey::Make(n, n + 1);
  kp.sk.lambda = Lcm(p - 1, q - 1);
  const BigInt u = L(PowMod(kp.pk.g, kp.sk.lambda, kp.pk.n_squared), n);
  if (!Invert(kp.sk.mu, u, n)) {
    throw Error(ErrorCode::kKeygenFailure, "L(g^lambda) not invertible mod n");
  }
  return kp;
}

Keypair GenerateKeypair(unsigned bits, CounterRng& rng) {
  if (bits < 16 || bits > 4096 || bits % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "key size must be even and in [16, 4096], got " +
                    std::to_string(bits));
  }
  for (int attempt = 0; attempt < kKeygenAttempts; ++attempt) {
    const BigInt p = RandomPrime(bits / 2, rng);
    const BigInt q = RandomPrime(bits / 2, rng);
    if (p == q) continue;
    if (Gcd(p * q, (p - 1) * (q - 1)) != 1) continue;
    Keypair kp = KeypairFromPrimes(p, q);
    if (kp.pk.bits == bits) return kp;
  }
  throw Error(ErrorCode::kKeygenFailure,
              "retry budget exhausted for " + std::to_string(bits) + " bits");
}

Ciphertext EncryptWithNonce(const PublicKey& pk, const EncodedValue& m,
                            const BigInt& r) {
  if (m.raw < 0 || m.raw >= pk.n) {
    throw Error(ErrorCode::kPlaintextOutOfRange,
                "plaintext must lie in [0, n)");
  }
  if (r <= 0 || r >= pk.n || Gcd(r, pk.n) != 1) {
    throw Error(ErrorCode::kInvalidArgument, "nonce must be a unit in (0, n)");
  }
  BigInt gm;
  if (pk.g == pk.n + 1) {
    gm = (1 + m.raw * pk.n) % pk.n_squared;  // (1+n)^m = 1 + mn mod n^2
  } else {
    gm = PowMod(pk.g, m.raw, pk.n_squared);
  }
  const BigInt rn = PowMod(r, pk.n, pk.n_squared);
  return Ciphertext{gm * rn % pk.n_squared, pk.n};
}

Ciphertext Encrypt(const PublicKey& pk, const EncodedValue& m,
                   CounterRng& rng) {
  BigInt r;
  do {
    r = RandomBelow(pk.n, rng);
  } while (r == 0 || Gcd(r, pk.n) != 1);
  return EncryptWithNonce(pk, m, r);
}

void CheckCiphertext(const PublicKey& pk, const Ciphertext& c) {
  if (c.n != pk.n) {
    throw Error(ErrorCode::kDomainMismatch,
                "ciphertext was produced under a different public key");
  }
  if (c.value < 1 || c.value >= pk.n_squared || Gcd(c.value, pk.n) != 1) {
    throw Error(ErrorCode::kMalformedCiphertext,
                "ciphertext is not a unit modulo n^2");
  }
}

EncodedValue Decrypt(const PublicKey& pk, const SecretKey& sk,
                     const Ciphertext& c, std::uint64_t scale) {
  CheckCiphertext(pk, c);
  const BigInt u = L(PowMod(c.value, sk.lambda, pk.n_squared), pk.n);
  return EncodedValue{u * sk.mu % pk.n, scale};
}

Ciphertext Add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  if (a.n != pk.n || b.n != pk.n) {
    throw Error(ErrorCode::kDomainMismatch,
                "cannot add ciphertexts under different keys");
  }
  return Ciphertext{a.value * b.value % pk.n_squared, pk.n};
}

Ciphertext Identity(const PublicKey& pk) { return Ciphertext{1, pk.n}; }

Ciphertext Sum(const PublicKey& pk, std::span<const Ciphertext> terms) {
  Ciphertext acc = Identity(pk);
  for (const Ciphertext& c : terms) acc = Add(pk, acc, c);
  return acc;
}

BigInt ToUnits(double kwh, std::uint64_t scale) {
  if (!std::isfinite(kwh)) {
    throw Error(ErrorCode::kEncodingOverflow, "value is not finite");
  }
  const double scaled = std::round(kwh * static_cast<double>(scale));
  if (!std::isfinite(scaled)) {
    throw Error(ErrorCode::kEncodingOverflow, "scaled value is not finite");
  }
  BigInt units;
  mpz_set_d(units.get_mpz_t(), scaled);
  return units;
}

EncodedValue EncodeUnits(const BigInt& units, std::uint64_t scale,
                         const PublicKey& pk) {
  if (scale == 0) {
    throw Error(ErrorCode::kInvalidArgument, "scale must be positive");
  }
  const BigInt magnitude = abs(units);
  if (2 * magnitude >= pk.n) {
    throw Error(ErrorCode::kEncodingOverflow,
                "|value| * scale must be below n/2");
  }
  return EncodedValue{units >= 0 ? BigInt(units) : BigInt(pk.n - magnitude),
                      scale};
}

EncodedValue EncodeSigned(double kwh, std::uint64_t scale,
                          const PublicKey& pk) {
  return EncodeUnits(ToUnits(kwh, scale), scale, pk);
}

BigInt DecodeUnits(const EncodedValue& v, const PublicKey& pk) {
  if (2 * v.raw < pk.n) return v.raw;
  return v.raw - pk.n;
}

double DecodeSigned(const EncodedValue& v, const PublicKey& pk) {
  return DecodeUnits(v, pk).get_d() / static_cast<double>(v.scale);
}

Bytes ToBytes(const BigInt& v) {
  if (v == 0) return {};
  Bytes out((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(written);
  return out;
}

BigInt FromBytes(std::span<const std::uint8_t> bytes) {
  BigInt v = 0;
  if (!bytes.empty()) {
    mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return v;
}

Bytes SerializePublicKey(const PublicKey& pk) {
  Bytes out;
  PutU32(out, pk.bits);
  PutInteger(out, pk.n);
  PutInteger(out, pk.g);
  return out;
}

PublicKey ParsePublicKey(std::span<const std::uint8_t> bytes) {
  Reader reader(bytes);
  const std::uint32_t bits = reader.U32();
  BigInt n = reader.Integer();
  BigInt g = reader.Integer();
  reader.ExpectEnd();
  if (n < 3) throw Error(ErrorCode::kParseError, "modulus too small");
  PublicKey pk = PublicKey::Make(n, g);
  if (pk.bits != bits) {
    throw Error(ErrorCode::kParseError, "declared key size disagrees with n");
  }
  if (g <= 0 || g >= pk.n_squared || Gcd(g, n) != 1) {
    throw Error(ErrorCode::kParseError, "g is not a unit modulo n^2");
  }
  return pk;
}

Bytes SerializeSecretKey(const SecretKey& sk) {
  Bytes out;
  PutInteger(out, sk.lambda);
  PutInteger(out, sk.mu);
  return out;
}

SecretKey ParseSecretKey(std::span<const std::uint8_t> bytes) {
  Reader reader(bytes);
  SecretKey sk;
  sk.lambda = reader.Integer();
  sk.mu = reader.Integer();
  reader.ExpectEnd();
  return sk;
}

std::size_t CiphertextBytes(const PublicKey& pk) {
  return (BitLength(pk.n_squared) + 7) / 8;
}

Bytes SerializeCiphertext(const PublicKey& pk, const Ciphertext& c) {
  CheckCiphertext(pk, c);
  Bytes mag = ToBytes(c.value);
  Bytes out(CiphertextBytes(pk) - mag.size(), 0);
  out.insert(out.end(), mag.begin(), mag.end());
  return out;
}

Ciphertext ParseCiphertext(const PublicKey& pk,
                           std::span<const std::uint8_t> bytes) {
  if (bytes.size() != CiphertextBytes(pk)) {
    throw Error(ErrorCode::kMalformedCiphertext,
                "ciphertext length " + std::to_string(bytes.size()) +
                    " != " + std::to_string(CiphertextBytes(pk)));
  }
  Ciphertext c{FromBytes(bytes), pk.n};
  CheckCiphertext(pk, c);
  return c;
}

std::string HexEncode(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes HexDecode(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw Error(ErrorCode::kParseError, "odd-length hex string");
  }
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error(ErrorCode::kParseError, "invalid hex digit");
  };
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) << 4 |
                                            nibble(hex[i + 1])));
  }
  return out;
}

}  // namespace smartagg::paillier
