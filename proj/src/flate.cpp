#include <zlib.h>

#include <cstring>

#include "trapdoc/errors.hpp"
#include "trapdoc/pdf_io.hpp"

namespace trapdoc {

std::string flate_decode(std::string_view bytes) {
    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    if (inflateInit(&zs) != Z_OK) throw CorruptStream("inflateInit failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
    zs.avail_in = static_cast<uInt>(bytes.size());

    std::string out;
    char buf[1 << 15];
    int ret = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof(buf);
        ret = inflate(&zs, Z_NO_FLUSH);
        if (ret != Z_OK && ret != Z_STREAM_END) {
            inflateEnd(&zs);
            throw CorruptStream("inflate failed with code " + std::to_string(ret));
        }
        out.append(buf, sizeof(buf) - zs.avail_out);
    } while (ret != Z_STREAM_END && (zs.avail_in > 0 || zs.avail_out == 0));
    inflateEnd(&zs);
    if (ret != Z_STREAM_END) throw CorruptStream("truncated Flate stream");
    return out;
}

std::string flate_encode(std::string_view bytes) {
    uLongf bound = compressBound(static_cast<uLong>(bytes.size()));
    std::string out(bound, '\0');
    if (compress2(reinterpret_cast<Bytef*>(out.data()), &bound,
                  reinterpret_cast<const Bytef*>(bytes.data()),
                  static_cast<uLong>(bytes.size()), Z_BEST_COMPRESSION) != Z_OK)
        throw CorruptStream("deflate failed");
    out.resize(bound);
    return out;
}

}  // namespace trapdoc
