#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lsa {

using Bits = std::uint32_t;

class FieldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// GF(2^k), k <= 16. Instances are interned so raw pointers stay valid for the
// lifetime of the process; two fields compare equal iff they are the same object.
class Field {
public:
    static constexpr unsigned max_degree = 16;

    static const Field& get(unsigned degree, Bits modulus) {
        validate(degree, modulus);
        static std::mutex mu;
        static std::map<std::pair<unsigned, Bits>, std::unique_ptr<Field>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = registry[{degree, modulus}];
        if (!slot) slot.reset(new Field(degree, modulus));
        return *slot;
    }

    // Default moduli: t+1, t^2+t+1, t^3+t+1, t^4+t+1; larger degrees take the
    // smallest irreducible modulus.
    static const Field& gf(unsigned degree) {
        switch (degree) {
        case 1: return get(1, 0x3);
        case 2: return get(2, 0x7);
        case 3: return get(3, 0xb);
        case 4: return get(4, 0x13);
        default: break;
        }
        if (degree == 0 || degree > max_degree)
            throw FieldError("field degree must be in 1..16, got " + std::to_string(degree));
        for (Bits m = (Bits{1} << degree) | 1; m < (Bits{1} << (degree + 1)); m += 2)
            if (is_irreducible(degree, m)) return get(degree, m);
        throw FieldError("no irreducible modulus found");
    }

    static bool is_irreducible(unsigned degree, Bits modulus) {
        if (degree == 0 || poly_degree(modulus) != static_cast<int>(degree)) return false;
        for (unsigned d = 1; d <= degree / 2; ++d)
            for (Bits p = Bits{1} << d; p < (Bits{1} << (d + 1)); ++p)
                if (poly_mod(modulus, p) == 0) return false;
        return true;
    }

    unsigned degree() const { return degree_; }
    Bits modulus() const { return modulus_; }
    Bits order() const { return Bits{1} << degree_; }
    bool contains(Bits a) const { return a < order(); }

    Bits add(Bits a, Bits b) const { return a ^ b; }

    Bits mul(Bits a, Bits b) const {
        if (!table_.empty()) return table_[(a << degree_) | b];
        return slow_mul(a, b);
    }

    Bits square(Bits a) const { return mul(a, a); }

    Bits pow(Bits a, std::uint64_t e) const {
        Bits r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    Bits inv(Bits a) const {
        if (a == 0) throw FieldError("inverse of zero");
        return pow(a, (std::uint64_t{1} << degree_) - 2);
    }

    Bits div(Bits a, Bits b) const { return mul(a, inv(b)); }

    // Frobenius is bijective, so every element has exactly one square root.
    Bits sqrt(Bits a) const { return pow(a, std::uint64_t{1} << (degree_ - 1)); }

    // 0 first, 1 second, then increasing bit patterns.
    std::vector<Bits> elements() const {
        std::vector<Bits> out(order());
        for (Bits i = 0; i < order(); ++i) out[i] = i;
        return out;
    }

    std::string literal(Bits a) const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string hex;
        do {
            hex.insert(hex.begin(), digits[a & 0xf]);
            a >>= 4;
        } while (a);
        return "0x" + hex;
    }

    Bits parse(std::string_view text) const {
        Bits v = parse_literal(text);
        if (!contains(v))
            throw FieldError("literal " + std::string(text) + " is outside GF(2^" +
                             std::to_string(degree_) + ")");
        return v;
    }

    static Bits parse_literal(std::string_view text) {
        if (text.size() < 3 || text[0] != '0' || text[1] != 'x')
            throw FieldError("field literal must look like 0x<hex>, got '" + std::string(text) + "'");
        Bits v = 0;
        for (char c : text.substr(2)) {
            unsigned d;
            if (c >= '0' && c <= '9') d = unsigned(c - '0');
            else if (c >= 'a' && c <= 'f') d = unsigned(c - 'a' + 10);
            else throw FieldError("bad hex digit in literal '" + std::string(text) + "'");
            if (v > 0x0fffffff) throw FieldError("literal too large: " + std::string(text));
            v = (v << 4) | d;
        }
        return v;
    }

    std::string describe() const {
        return "GF(2^" + std::to_string(degree_) + ") mod " + literal(modulus_);
    }

    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

private:
    Field(unsigned degree, Bits modulus) : degree_(degree), modulus_(modulus) {
        if (degree_ <= 8) {
            table_.resize(std::size_t{1} << (2 * degree_));
            for (Bits a = 0; a < order(); ++a)
                for (Bits b = 0; b < order(); ++b) table_[(a << degree_) | b] = slow_mul(a, b);
        }
    }

    static void validate(unsigned degree, Bits modulus) {
        if (degree == 0 || degree > max_degree)
            throw FieldError("field degree must be in 1..16, got " + std::to_string(degree));
        if (poly_degree(modulus) != static_cast<int>(degree))
            throw FieldError("modulus 0x" + hex(modulus) + " does not have degree " + std::to_string(degree));
        if (!is_irreducible(degree, modulus))
            throw FieldError("modulus 0x" + hex(modulus) + " is reducible");
    }

    static std::string hex(Bits v) {
        static constexpr char digits[] = "0123456789abcdef";
        std::string s;
        do {
            s.insert(s.begin(), digits[v & 0xf]);
            v >>= 4;
        } while (v);
        return s;
    }

    static int poly_degree(Bits p) {
        int d = -1;
        while (p) {
            ++d;
            p >>= 1;
        }
        return d;
    }

    static Bits poly_mod(Bits a, Bits m) {
        int dm = poly_degree(m);
        for (int d = poly_degree(a); d >= dm; d = poly_degree(a)) a ^= m << (d - dm);
        return a;
    }

    Bits slow_mul(Bits a, Bits b) const {
        std::uint64_t prod = 0;
        for (unsigned i = 0; i < degree_; ++i)
            if (b & (Bits{1} << i)) prod ^= std::uint64_t{a} << i;
        for (int i = 2 * int(degree_) - 2; i >= int(degree_); --i)
            if (prod & (std::uint64_t{1} << i)) prod ^= std::uint64_t{modulus_} << (i - int(degree_));
        return static_cast<Bits>(prod);
    }

    unsigned degree_;
    Bits modulus_;
    std::vector<Bits> table_;
};

// Value type bound to a field. Mixing fields throws.
class FieldElement {
public:
    FieldElement(const Field& f, Bits bits) : f_(&f), bits_(bits) {
        if (!f.contains(bits)) throw FieldError("value " + f.literal(bits) + " not in " + f.describe());
    }

    const Field& field() const { return *f_; }
    Bits bits() const { return bits_; }
    bool is_zero() const { return bits_ == 0; }

    FieldElement operator+(const FieldElement& o) const { return {*f_, f_->add(bits_, same(o))}; }
    FieldElement operator-(const FieldElement& o) const { return *this + o; }
    FieldElement operator*(const FieldElement& o) const { return {*f_, f_->mul(bits_, same(o))}; }
    FieldElement operator/(const FieldElement& o) const { return {*f_, f_->div(bits_, same(o))}; }
    FieldElement inv() const { return {*f_, f_->inv(bits_)}; }
    FieldElement sqrt() const { return {*f_, f_->sqrt(bits_)}; }
    bool operator==(const FieldElement& o) const { return f_ == o.f_ && bits_ == o.bits_; }
    std::string literal() const { return f_->literal(bits_); }

private:
    Bits same(const FieldElement& o) const {
        if (f_ != o.f_) throw FieldError("field mismatch: " + f_->describe() + " vs " + o.f_->describe());
        return o.bits_;
    }
    const Field* f_;
    Bits bits_;
};

inline std::vector<FieldElement> enumerate(const Field& f) {
    std::vector<FieldElement> out;
    out.reserve(f.order());
    for (Bits b : f.elements()) out.emplace_back(f, b);
    return out;
}

}  // namespace lsa
