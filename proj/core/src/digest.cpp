#include <dagbft/digest.hpp>

#include <stdexcept>

#include <sodium.h>

namespace dagbft {

namespace {
    constexpr char hex_digits[] = "0123456789abcdef";

    int hex_value(char c)
    {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    }

    void ensure_sodium()
    {
        static const int rc = sodium_init();
        if (rc < 0)
            throw std::runtime_error("libsodium initialization failed");
    }
}

std::string digest_t::hex() const
{
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b: bytes) {
        out.push_back(hex_digits[b >> 4]);
        out.push_back(hex_digits[b & 0xF]);
    }
    return out;
}

digest_t digest_t::from_hex(std::string_view text)
{
    digest_t d;
    if (text.size() != d.bytes.size() * 2)
        throw std::invalid_argument("digest must be 32 hex characters");
    for (std::size_t i = 0; i < d.bytes.size(); ++i) {
        const int hi = hex_value(text[2 * i]);
        const int lo = hex_value(text[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("digest contains a non-hex character");
        d.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return d;
}

struct hasher::state {
    crypto_generichash_state st;
};

hasher::hasher(): _state{std::make_unique<state>()}
{
    ensure_sodium();
    crypto_generichash_init(&_state->st, nullptr, 0, 16);
}

hasher::~hasher() = default;

hasher &hasher::tag(char t)
{
    const auto b = static_cast<unsigned char>(t);
    crypto_generichash_update(&_state->st, &b, 1);
    return *this;
}

hasher &hasher::u64(std::uint64_t v)
{
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i)
        buf[i] = static_cast<unsigned char>(v >> (8 * i));
    crypto_generichash_update(&_state->st, buf, sizeof(buf));
    return *this;
}

hasher &hasher::str(std::string_view s)
{
    u64(s.size());
    crypto_generichash_update(&_state->st, reinterpret_cast<const unsigned char *>(s.data()), s.size());
    return *this;
}

hasher &hasher::digest(const digest_t &d)
{
    crypto_generichash_update(&_state->st, d.bytes.data(), d.bytes.size());
    return *this;
}

digest_t hasher::finish()
{
    digest_t d;
    crypto_generichash_final(&_state->st, d.bytes.data(), d.bytes.size());
    return d;
}

} // namespace dagbft
