#pragma once

// Kodaira symbols for the special fiber of the Neron model.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tamlab {

enum class KodairaFamily : std::uint8_t {
    I0,
    In,      // n >= 1
    II,
    III,
    IV,
    I0star,
    Instar,  // n >= 1
    IVstar,
    IIIstar,
    IIstar,
};

struct KodairaType {
    KodairaFamily family = KodairaFamily::I0;
    std::uint64_t n = 0;  // used by In / Instar only

    static KodairaType I0() { return {KodairaFamily::I0, 0}; }
    static KodairaType In(std::uint64_t n) {
        if (n < 1) throw std::invalid_argument("In requires n >= 1");
        return {KodairaFamily::In, n};
    }
    static KodairaType II() { return {KodairaFamily::II, 0}; }
    static KodairaType III() { return {KodairaFamily::III, 0}; }
    static KodairaType IV() { return {KodairaFamily::IV, 0}; }
    static KodairaType I0star() { return {KodairaFamily::I0star, 0}; }
    static KodairaType Instar(std::uint64_t n) {
        if (n < 1) throw std::invalid_argument("In* requires n >= 1");
        return {KodairaFamily::Instar, n};
    }
    static KodairaType IVstar() { return {KodairaFamily::IVstar, 0}; }
    static KodairaType IIIstar() { return {KodairaFamily::IIIstar, 0}; }
    static KodairaType IIstar() { return {KodairaFamily::IIstar, 0}; }

    friend bool operator==(const KodairaType& a, const KodairaType& b) {
        return a.family == b.family && a.n == b.n;
    }
};

// Stable string grammar: "I0", "In:<n>", "II", "III", "IV",
// "I0*", "In*:<n>", "IV*", "III*", "II*".
inline std::string to_string(const KodairaType& k) {
    switch (k.family) {
        case KodairaFamily::I0: return "I0";
        case KodairaFamily::In: return "In:" + std::to_string(k.n);
        case KodairaFamily::II: return "II";
        case KodairaFamily::III: return "III";
        case KodairaFamily::IV: return "IV";
        case KodairaFamily::I0star: return "I0*";
        case KodairaFamily::Instar: return "In*:" + std::to_string(k.n);
        case KodairaFamily::IVstar: return "IV*";
        case KodairaFamily::IIIstar: return "III*";
        case KodairaFamily::IIstar: return "II*";
    }
    throw std::logic_error("unreachable");
}

inline KodairaType kodaira_from_string(const std::string& s) {
    if (s == "I0") return KodairaType::I0();
    if (s == "II") return KodairaType::II();
    if (s == "III") return KodairaType::III();
    if (s == "IV") return KodairaType::IV();
    if (s == "I0*") return KodairaType::I0star();
    if (s == "IV*") return KodairaType::IVstar();
    if (s == "III*") return KodairaType::IIIstar();
    if (s == "II*") return KodairaType::IIstar();
    if (s.rfind("In:", 0) == 0) return KodairaType::In(std::stoull(s.substr(3)));
    if (s.rfind("In*:", 0) == 0) return KodairaType::Instar(std::stoull(s.substr(4)));
    throw std::invalid_argument("unknown Kodaira symbol: " + s);
}

// 1 if n odd, 2 if n even: the nonsplit multiplicative component count.
inline std::uint64_t epsilon(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("epsilon requires n >= 1");
    return n % 2 == 1 ? 1 : 2;
}

// Component-group legality of (type, c): membership in the admissible set.
inline bool cp_admissible(const KodairaType& k, std::uint64_t c) {
    switch (k.family) {
        case KodairaFamily::I0:
        case KodairaFamily::II:
        case KodairaFamily::IIstar: return c == 1;
        case KodairaFamily::III:
        case KodairaFamily::IIIstar: return c == 2;
        case KodairaFamily::IV:
        case KodairaFamily::IVstar: return c == 1 || c == 3;
        case KodairaFamily::I0star: return c == 1 || c == 2 || c == 4;
        case KodairaFamily::Instar: return c == 2 || c == 4;
        case KodairaFamily::In: return c == 1 || c == 2 || c == k.n || c == epsilon(k.n);
    }
    return false;
}

}  // namespace tamlab
