#include "bclab/level_cache.hpp"

#include "bclab/errors.hpp"
#include "detail/int128.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bclab {

namespace {

constexpr char kMagic[4] = {'B', 'C', 'L', 'V'};
constexpr std::uint32_t kVersion = 1;

std::string key_text(const IntPolynomial& p, int n, DigitAlphabet alphabet, long first_exponent) {
    return p.to_csv() + "|" + std::to_string(n) + "|" + to_string(alphabet) + "|" + std::to_string(first_exponent);
}

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int s = 24; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
    }
    void u64(std::uint64_t v) {
        for (int s = 56; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
    }
    // u32 byte length, sign byte, big-endian magnitude.
    void integer(const mpz_class& v) {
        std::size_t count = 0;
        std::vector<unsigned char> mag((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8 + 1);
        mpz_export(mag.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
        u32(static_cast<std::uint32_t>(count));
        u8(sgn(v) < 0 ? 1 : 0);
        buf_.append(reinterpret_cast<const char*>(mag.data()), count);
    }
    void bytes(const char* p, std::size_t n) { buf_.append(p, n); }
    const std::string& data() const { return buf_; }

private:
    std::string buf_;
};

class Reader {
public:
    explicit Reader(std::string data) : buf_(std::move(data)) {}
    bool ok() const { return ok_; }
    bool at_end() const { return pos_ == buf_.size(); }
    std::uint8_t u8() {
        if (pos_ >= buf_.size()) {
            ok_ = false;
            return 0;
        }
        return static_cast<std::uint8_t>(buf_[pos_++]);
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | u8();
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | u8();
        return v;
    }
    mpz_class integer() {
        const std::uint32_t len = u32();
        const std::uint8_t neg = u8();
        if (!ok_ || len > buf_.size() - pos_) {
            ok_ = false;
            return 0;
        }
        mpz_class v;
        mpz_import(v.get_mpz_t(), len, 1, 1, 1, 0, buf_.data() + pos_);
        pos_ += len;
        return neg ? mpz_class(-v) : v;
    }
    bool magic() {
        if (buf_.size() < 4 || buf_.compare(0, 4, kMagic, 4) != 0) return ok_ = false;
        pos_ = 4;
        return true;
    }

private:
    std::string buf_;
    std::size_t pos_ = 0;
    bool ok_ = true;
};

struct FileLock {
    int fd = -1;
    FileLock(const std::filesystem::path& path, int mode) {
        fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd >= 0 && ::flock(fd, mode) != 0) {
            ::close(fd);
            fd = -1;
        }
    }
    ~FileLock() {
        if (fd >= 0) {
            ::flock(fd, LOCK_UN);
            ::close(fd);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;
};

}  // namespace

LevelCache::LevelCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path LevelCache::path_for(const IntPolynomial& p, int n, DigitAlphabet alphabet,
                                           long first_exponent) const {
    const std::string key = key_text(p, n, alphabet, first_exponent);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : key) h = (h ^ c) * 0x100000001b3ULL;
    h = detail::mix64(h);
    std::ostringstream name;
    name << std::hex << std::setw(16) << std::setfill('0') << h << ".lvl";
    return dir_ / name.str();
}

std::optional<LevelSet> LevelCache::load(const IntPolynomial& p, int n, DigitAlphabet alphabet,
                                         long first_exponent) const {
    const auto path = path_for(p, n, alphabet, first_exponent);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    std::string data;
    {
        FileLock lock(path.string() + ".lock", LOCK_SH);
        std::ifstream in(path, std::ios::binary);
        if (!in) return std::nullopt;
        std::ostringstream ss;
        ss << in.rdbuf();
        data = ss.str();
    }
    Reader r(std::move(data));
    if (!r.magic() || r.u32() != kVersion) return std::nullopt;
    const std::uint32_t ncoef = r.u32();
    if (!r.ok() || ncoef != static_cast<std::uint32_t>(p.degree() + 1)) return std::nullopt;
    const auto coeffs = p.descending();
    for (std::uint32_t i = 0; i < ncoef; ++i)
        if (r.integer() != coeffs[i]) return std::nullopt;
    if (r.u32() != static_cast<std::uint32_t>(n)) return std::nullopt;
    if (r.u8() != static_cast<std::uint8_t>(alphabet == DigitAlphabet::Binary ? 0 : 1)) return std::nullopt;
    if (r.integer() != first_exponent) return std::nullopt;
    const std::uint64_t count = r.u64();
    const std::uint32_t d = r.u32();
    const mpz_class scale = r.integer();
    if (!r.ok() || d != static_cast<std::uint32_t>(p.degree()) || scale <= 0) return std::nullopt;

    LevelSet out;
    out.n_ = n;
    out.alphabet_ = alphabet;
    out.first_exponent_ = first_exponent;
    out.d_ = static_cast<int>(d);
    out.scale_ = scale;
    out.keys_.reserve(count * d);
    out.mult_.reserve(count);
    out.witness_.reserve(count);
    for (std::uint64_t i = 0; i < count && r.ok(); ++i) {
        for (std::uint32_t j = 0; j < d; ++j) {
            auto c = detail::to_int128(r.integer());
            if (!c) return std::nullopt;
            out.keys_.push_back(*c);
        }
        const mpz_class m = r.integer();
        if (m <= 0 || !m.fits_ulong_p()) return std::nullopt;
        out.mult_.push_back(m.get_ui());
        Witness w;
        w.plus = r.u64();
        w.minus = r.u64();
        out.witness_.push_back(w);
    }
    if (!r.ok() || !r.at_end()) return std::nullopt;
    return out;
}

void LevelCache::store(const IntPolynomial& p, const LevelSet& level) const {
    Writer w;
    w.bytes(kMagic, 4);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(p.degree() + 1));
    for (const auto& c : p.descending()) w.integer(c);
    w.u32(static_cast<std::uint32_t>(level.n_));
    w.u8(level.alphabet_ == DigitAlphabet::Binary ? 0 : 1);
    w.integer(mpz_class(level.first_exponent_));
    w.u64(level.size());
    w.u32(static_cast<std::uint32_t>(level.d_));
    w.integer(level.scale_);
    for (std::size_t i = 0; i < level.size(); ++i) {
        for (__int128 c : level.scaled_residue(i)) w.integer(detail::to_mpz(c));
        w.integer(mpz_class(static_cast<unsigned long>(level.mult_[i])));
        w.u64(level.witness_[i].plus);
        w.u64(level.witness_[i].minus);
    }

    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) fail(ErrorCode::CacheIO, "cannot create cache directory " + dir_.string() + ": " + ec.message());
    const auto path = path_for(p, level.n_, level.alphabet_, level.first_exponent_);
    FileLock lock(path.string() + ".lock", LOCK_EX);
    if (lock.fd < 0) fail(ErrorCode::CacheIO, "cannot lock " + path.string());
    const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
        out.flush();
        if (!out) fail(ErrorCode::CacheIO, "cannot write " + tmp);
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        fail(ErrorCode::CacheIO, "cannot publish " + path.string() + ": " + ec.message());
    }
}

}  // namespace bclab
