#include "seedseg/imageio.hpp"

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>
#include <tiffio.h>

#include "seedseg/color.hpp"

namespace fs = std::filesystem;

namespace seedseg {

// row buffers are handed to the codecs as packed RGB triples
static_assert(sizeof(Rgb8) == 3);

namespace {

std::string lower_ext(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

struct FileHandle {
    std::FILE* fp = nullptr;
    explicit FileHandle(const fs::path& path, const char* mode)
        : fp(std::fopen(path.string().c_str(), mode)) {}
    ~FileHandle() {
        if (fp) std::fclose(fp);
    }
    FileHandle(const FileHandle&) = delete;
    FileHandle& operator=(const FileHandle&) = delete;
};

// ---- PNG ----------------------------------------------------------------
// libpng reports failures through longjmp; png structs are torn down manually
// on both paths before anything is thrown.

RgbImage load_png(const fs::path& path) {
    FileHandle file(path, "rb");
    if (!file.fp) throw IoError("cannot open " + path.string());

    png_byte sig[8];
    if (std::fread(sig, 1, 8, file.fp) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw CorruptImage("not a PNG file: " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng allocation failure");
    }

    RgbImage img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw CorruptImage("PNG decode failed: " + path.string());
    }

    png_init_io(png, file.fp);
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    // normalize every source layout to 8-bit RGB
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_16(png);
    png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    if (w == 0 || h == 0 || png_get_rowbytes(png, info) != w * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw CorruptImage("unexpected PNG layout: " + path.string());
    }

    img = RgbImage(static_cast<int>(w), static_cast<int>(h));
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = reinterpret_cast<png_bytep>(&img.pixels[static_cast<std::size_t>(y) * w]);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png(const fs::path& path, int width, int height, int channels,
               const unsigned char* data) {
    FileHandle file(path, "wb");
    if (!file.fp) throw IoError("cannot write " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng allocation failure");
    }

    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed: " + path.string());
    }

    png_init_io(png, file.fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y)
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(data + y * stride);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// ---- JPEG ---------------------------------------------------------------

struct JpegErrorJump {
    jpeg_error_mgr pub;
    std::jmp_buf env;
};

void jpeg_error_exit_jump(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorJump*>(cinfo->err);
    std::longjmp(err->env, 1);
}

void jpeg_emit_nothing(j_common_ptr, int) {}

RgbImage load_jpeg(const fs::path& path) {
    FileHandle file(path, "rb");
    if (!file.fp) throw IoError("cannot open " + path.string());

    jpeg_decompress_struct cinfo;
    JpegErrorJump jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit_jump;
    jerr.pub.emit_message = jpeg_emit_nothing;

    RgbImage img;
    if (setjmp(jerr.env)) {
        jpeg_destroy_decompress(&cinfo);
        throw CorruptImage("JPEG decode failed: " + path.string());
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, file.fp);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    img = RgbImage(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = reinterpret_cast<JSAMPROW>(
            &img.pixels[static_cast<std::size_t>(cinfo.output_scanline) * img.width]);
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

// ---- TIFF ---------------------------------------------------------------

RgbImage load_tiff(const fs::path& path) {
    TIFFSetErrorHandler(nullptr);
    TIFFSetWarningHandler(nullptr);
    TIFF* tif = TIFFOpen(path.string().c_str(), "r");
    if (!tif) throw CorruptImage("TIFF decode failed: " + path.string());

    std::uint32_t w = 0, h = 0;
    TIFFGetField(tif, TIFFTAG_IMAGEWIDTH, &w);
    TIFFGetField(tif, TIFFTAG_IMAGELENGTH, &h);
    if (w == 0 || h == 0) {
        TIFFClose(tif);
        throw CorruptImage("TIFF with empty dimensions: " + path.string());
    }

    std::vector<std::uint32_t> raster(static_cast<std::size_t>(w) * h);
    const int ok = TIFFReadRGBAImageOriented(tif, w, h, raster.data(), ORIENTATION_TOPLEFT, 0);
    TIFFClose(tif);
    if (!ok) throw CorruptImage("TIFF decode failed: " + path.string());

    RgbImage img(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < raster.size(); ++i) {
        const std::uint32_t px = raster[i];
        img.pixels[i] = {static_cast<std::uint8_t>(TIFFGetR(px)),
                         static_cast<std::uint8_t>(TIFFGetG(px)),
                         static_cast<std::uint8_t>(TIFFGetB(px))};
    }
    return img;
}

} // namespace

bool is_supported_image(const fs::path& path) {
    const std::string ext = lower_ext(path);
    return ext == ".jpg" || ext == ".jpeg" || ext == ".png" || ext == ".tif" || ext == ".tiff";
}

RgbImage load_image(const fs::path& path) {
    if (!fs::exists(path)) throw FileNotFound("no such file: " + path.string());
    const std::string ext = lower_ext(path);
    if (ext == ".png") return load_png(path);
    if (ext == ".jpg" || ext == ".jpeg") return load_jpeg(path);
    if (ext == ".tif" || ext == ".tiff") return load_tiff(path);
    throw UnsupportedFormat("unsupported image extension: " + path.string());
}

void save_mask(const BinaryMask& mask, const fs::path& path) {
    std::vector<unsigned char> bytes(mask.bits.size());
    for (std::size_t i = 0; i < mask.bits.size(); ++i) bytes[i] = mask.bits[i] ? 255 : 0;
    write_png(path, mask.width, mask.height, 1, bytes.data());
}

BinaryMask load_mask(const fs::path& path) {
    const RgbImage img = load_image(path);
    BinaryMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const Rgb8 p = img.pixels[i];
        mask.bits[i] = luma601(p.r, p.g, p.b) > 127 ? 1 : 0;
    }
    return mask;
}

void save_image_png(const RgbImage& img, const fs::path& path) {
    write_png(path, img.width, img.height, 3,
              reinterpret_cast<const unsigned char*>(img.pixels.data()));
}

void save_image_tiff(const RgbImage& img, const fs::path& path) {
    TIFFSetErrorHandler(nullptr);
    TIFFSetWarningHandler(nullptr);
    TIFF* tif = TIFFOpen(path.string().c_str(), "w");
    if (!tif) throw IoError("cannot write " + path.string());

    TIFFSetField(tif, TIFFTAG_IMAGEWIDTH, static_cast<std::uint32_t>(img.width));
    TIFFSetField(tif, TIFFTAG_IMAGELENGTH, static_cast<std::uint32_t>(img.height));
    TIFFSetField(tif, TIFFTAG_SAMPLESPERPIXEL, 3);
    TIFFSetField(tif, TIFFTAG_BITSPERSAMPLE, 8);
    TIFFSetField(tif, TIFFTAG_ORIENTATION, ORIENTATION_TOPLEFT);
    TIFFSetField(tif, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    TIFFSetField(tif, TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_RGB);
    TIFFSetField(tif, TIFFTAG_ROWSPERSTRIP, 1);

    bool failed = false;
    for (int y = 0; y < img.height && !failed; ++y) {
        const void* row = &img.pixels[static_cast<std::size_t>(y) * img.width];
        failed = TIFFWriteScanline(tif, const_cast<void*>(row), static_cast<std::uint32_t>(y)) < 0;
    }
    TIFFClose(tif);
    if (failed) throw IoError("TIFF encode failed: " + path.string());
}

void save_image_jpeg(const RgbImage& img, const fs::path& path, int quality) {
    FileHandle file(path, "wb");
    if (!file.fp) throw IoError("cannot write " + path.string());

    jpeg_compress_struct cinfo;
    JpegErrorJump jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit_jump;
    jerr.pub.emit_message = jpeg_emit_nothing;

    if (setjmp(jerr.env)) {
        jpeg_destroy_compress(&cinfo);
        throw IoError("JPEG encode failed: " + path.string());
    }

    jpeg_create_compress(&cinfo);
    jpeg_stdio_dest(&cinfo, file.fp);
    cinfo.image_width = static_cast<JDIMENSION>(img.width);
    cinfo.image_height = static_cast<JDIMENSION>(img.height);
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, std::clamp(quality, 1, 100), TRUE);
    jpeg_start_compress(&cinfo, TRUE);

    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(reinterpret_cast<const JSAMPLE*>(
            &img.pixels[static_cast<std::size_t>(cinfo.next_scanline) * img.width]));
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
}

} // namespace seedseg
