#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace dagbft {

// 128-bit content digest (BLAKE2b with a 16-byte output).
struct digest_t {
    std::array<std::uint8_t, 16> bytes{};

    auto operator<=>(const digest_t &) const = default;
    bool operator==(const digest_t &) const = default;

    std::string hex() const;
    static digest_t from_hex(std::string_view text);
};

// Incremental hasher over a canonical, length-prefixed binary encoding.
class hasher {
public:
    hasher();
    ~hasher();
    hasher(const hasher &) = delete;
    hasher &operator=(const hasher &) = delete;

    hasher &tag(char t);
    hasher &u64(std::uint64_t v);
    hasher &str(std::string_view s);
    hasher &digest(const digest_t &d);

    digest_t finish();

private:
    struct state;
    std::unique_ptr<state> _state;
};

struct digest_hash {
    std::size_t operator()(const digest_t &d) const noexcept
    {
        std::size_t h = 0;
        for (std::size_t i = 0; i < sizeof(std::size_t); ++i)
            h = (h << 8) | d.bytes[i];
        return h;
    }
};

} // namespace dagbft
