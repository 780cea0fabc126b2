#include "trapdoc/eyesight.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "trapdoc/errors.hpp"
#include "trapdoc/fonts.hpp"
#include "trapdoc/pdf_io.hpp"

namespace trapdoc {

namespace {

// Helvetica AFM advance widths, codes 32..126.
constexpr std::array<int, 95> kHelveticaAscii = {
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333,
    278, 278, 556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 278, 278,
    584, 584, 584, 556, 1015, 667, 667, 722, 722, 667, 611, 778, 722, 278,
    500, 667, 556, 833, 722, 778, 667, 778, 722, 667, 611, 722, 667, 944,
    667, 667, 611, 278, 278, 278, 469, 556, 333, 556, 556, 500, 556, 556,
    278, 556, 556, 222, 222, 500, 222, 833, 556, 556, 556, 556, 333, 500,
    278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584};

struct PageDraft {
    std::string content;
};

// Wires catalog/page-tree/font plumbing around finished content streams.
Document assemble(const std::vector<PageDraft>& pages, const TextLayout& layout,
                  PdfDict extra_resources) {
    Document doc;
    doc.version = "1.7";
    int next = 1;
    ObjectId catalog{next++, 0};
    ObjectId pages_id{next++, 0};
    ObjectId font_id{next++, 0};

    PdfDict font;
    font.set("Type", PdfName{"Font"});
    font.set("Subtype", PdfName{"Type1"});
    font.set("BaseFont", PdfName{layout.font});
    font.set("Encoding", PdfName{"WinAnsiEncoding"});
    doc.objects[font_id] = PdfValue(std::move(font));

    PdfDict fonts;
    fonts.set("F1", PdfValue(PdfReference{font_id.num, 0}));
    PdfDict resources;
    resources.set("Font", PdfValue(std::move(fonts)));
    for (auto& e : extra_resources.entries) resources.set(e.key, std::move(e.value));

    PdfArray kids;
    for (const PageDraft& draft : pages) {
        ObjectId content_id{next++, 0};
        ObjectId page_id{next++, 0};
        PdfStream content;
        content.dict.set("Length", PdfValue(static_cast<std::int64_t>(draft.content.size())));
        content.data = draft.content;
        doc.objects[content_id] = PdfValue(std::move(content));

        PdfDict page;
        page.set("Type", PdfName{"Page"});
        page.set("Parent", PdfValue(PdfReference{pages_id.num, 0}));
        page.set("MediaBox", PdfValue(PdfArray{PdfValue(0), PdfValue(0),
                                               PdfValue(layout.page_width),
                                               PdfValue(layout.page_height)}));
        page.set("Resources", PdfValue(resources));
        page.set("Contents", PdfValue(PdfReference{content_id.num, 0}));
        doc.objects[page_id] = PdfValue(std::move(page));
        doc.page_order.push_back(page_id);
        kids.push_back(PdfValue(PdfReference{page_id.num, 0}));
    }

    PdfDict pages_dict;
    pages_dict.set("Type", PdfName{"Pages"});
    pages_dict.set("Count", PdfValue(static_cast<std::int64_t>(kids.size())));
    pages_dict.set("Kids", PdfValue(std::move(kids)));
    doc.objects[pages_id] = PdfValue(std::move(pages_dict));

    PdfDict cat;
    cat.set("Type", PdfName{"Catalog"});
    cat.set("Pages", PdfValue(PdfReference{pages_id.num, 0}));
    doc.objects[catalog] = PdfValue(std::move(cat));
    doc.trailer.set("Root", PdfValue(PdfReference{catalog.num, 0}));
    return doc;
}

double word_width(const std::string& winansi, double size) {
    double units = 0;
    for (unsigned char c : winansi) units += helvetica_width(c);
    return units * size / 1000.0;
}

std::string show_line(const std::string& winansi) {
    return detail::escape_literal_string(winansi) + " Tj";
}

}  // namespace

int helvetica_width(unsigned char code) {
    if (code >= 32 && code <= 126) return kHelveticaAscii[code - 32];
    return 556;  // representative width for the WinAnsi upper half
}

Document build_text_pdf(const std::vector<std::string>& paragraphs, const TextLayout& layout,
                        int* replaced) {
    if (paragraphs.empty()) throw std::invalid_argument("build_text_pdf: no paragraphs");
    if (layout.margin * 2 >= layout.page_width || layout.margin * 2 >= layout.page_height)
        throw std::invalid_argument("build_text_pdf: margins swallow the page");

    int replaced_total = 0;
    const double usable = layout.page_width - 2 * layout.margin;
    const double space_w = helvetica_width(' ') * layout.base_font_size / 1000.0;

    std::vector<std::string> lines;  // WinAnsi bytes per line
    for (const std::string& para : paragraphs) {
        std::istringstream in(para);
        std::string word, line;
        double line_w = 0;
        bool any = false;
        while (in >> word) {
            int rep = 0;
            std::string enc = encode_winansi(word, &rep);
            replaced_total += rep;
            double w = word_width(enc, layout.base_font_size);
            if (!line.empty() && line_w + space_w + w > usable) {
                lines.push_back(line);
                line.clear();
                line_w = 0;
            }
            if (!line.empty()) {
                line += ' ';
                line_w += space_w;
            }
            line += enc;
            line_w += w;
            any = true;
        }
        if (!line.empty() || (any && lines.empty())) lines.push_back(line);
        if (!any) lines.push_back("");  // blank paragraph keeps a line slot
    }

    std::size_t per_page = 1;
    double span = layout.page_height - 2 * layout.margin - layout.base_font_size;
    if (span > 0 && layout.leading > 0)
        per_page = static_cast<std::size_t>(span / layout.leading) + 1;

    std::vector<PageDraft> pages;
    for (std::size_t at = 0; at < lines.size(); at += per_page) {
        std::string c;
        c += "BT\n/F1 " + detail::format_real(layout.base_font_size) + " Tf\n" +
             detail::format_real(layout.leading) + " TL\n" +
             detail::format_real(layout.margin) + " " +
             detail::format_real(layout.page_height - layout.margin - layout.base_font_size) +
             " Td\n";
        for (std::size_t i = at; i < std::min(lines.size(), at + per_page); ++i) {
            if (i > at) c += "T*\n";
            if (!lines[i].empty()) c += show_line(lines[i]) + "\n";
        }
        c += "ET\n";
        pages.push_back({std::move(c)});
    }
    if (pages.empty()) pages.push_back({"BT\nET\n"});

    if (replaced) *replaced = replaced_total;
    return assemble(pages, layout, {});
}

const std::vector<std::string>& eyesight_markers() {
    static const std::vector<std::string> m = {
        "Black 1", "Black 0.5", "Black 0", "White 1",   "White 0.5",
        "White 0", "Size 1",    "Size 0.5", "Size 0.1", "Size 0"};
    return m;
}

const std::vector<std::string>& eyesight_invisible_markers() {
    static const std::vector<std::string> m = {"Black 0", "White 0", "Size 0"};
    return m;
}

Document build_eyesight_pdf() {
    TextLayout layout;

    PdfDict gs1, gs05, gs0;
    gs1.set("Type", PdfName{"ExtGState"});
    gs1.set("ca", PdfValue(1.0));
    gs05.set("Type", PdfName{"ExtGState"});
    gs05.set("ca", PdfValue(0.5));
    gs0.set("Type", PdfName{"ExtGState"});
    gs0.set("ca", PdfValue(0.0));
    PdfDict ext;
    ext.set("GSa1", PdfValue(std::move(gs1)));
    ext.set("GSa05", PdfValue(std::move(gs05)));
    ext.set("GSa0", PdfValue(std::move(gs0)));
    PdfDict extra;
    extra.set("ExtGState", PdfValue(std::move(ext)));

    auto black_cell = [](const char* gs, double y, const std::string& text) {
        return std::string("q /") + gs + " gs BT /F1 10 Tf 72 " + detail::format_real(y) +
               " Td " + show_line(text) + " ET Q\n";
    };
    auto white_cell = [](const char* gs, double y, const std::string& text) {
        return std::string("q /") + gs + " gs 1 1 1 rg BT /F1 10 Tf 80 " +
               detail::format_real(y) + " Td " + show_line(text) + " ET Q\n";
    };
    auto sized_cell = [](double size, double y, const std::string& text) {
        return "BT /F1 " + detail::format_real(size) + " Tf 72 " + detail::format_real(y) +
               " Td " + show_line(text) + " ET\n";
    };

    std::string c;
    c += "BT /F1 10 Tf 72 720 Td " + show_line(kEyesightPrompt) + " ET\n";
    c += black_cell("GSa1", 680, "Black 1");
    c += black_cell("GSa05", 660, "Black 0.5");
    c += black_cell("GSa0", 640, "Black 0");
    c += "0 g 72 560 200 70 re f\n";  // black backdrop for the white cells
    c += white_cell("GSa1", 610, "White 1");
    c += white_cell("GSa05", 590, "White 0.5");
    c += white_cell("GSa0", 570, "White 0");
    c += sized_cell(10, 520, "Size 1");
    c += sized_cell(5, 500, "Size 0.5");
    c += sized_cell(1, 480, "Size 0.1");
    c += sized_cell(0, 460, "Size 0");

    return assemble({{std::move(c)}}, layout, std::move(extra));
}

}  // namespace trapdoc
