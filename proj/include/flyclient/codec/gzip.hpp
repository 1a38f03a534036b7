#pragma once

#include "flyclient/core/bytes.hpp"

namespace flyclient {

inline constexpr int kDefaultGzipLevel = 6;

// RFC 1952 gzip with a zero mtime, so output is a pure function of the input.
Bytes gzip_compress(ByteSpan data, int level = kDefaultGzipLevel);
Bytes gzip_decompress(ByteSpan data);

}  // namespace flyclient
