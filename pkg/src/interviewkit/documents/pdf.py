"""Minimal PDF text extraction.

Self-contained reader for the subset of PDF needed to ingest resumes and job
postings as text:

* object scanner (no reliance on the xref table), Flate/ASCII85/ASCIIHex
  filters, PDF 1.5 object streams;
* page-tree walk in document order;
* content-stream interpreter for the text operators (Tj/TJ/'/"), with line
  breaks driven by the text-positioning operators (Td/TD/T*/Tm);
* ToUnicode CMaps for composite fonts, latin-1 fallback for simple fonts.

Out of scope: encryption (rejected), image-only filters (skipped), OCR and
layout reconstruction. Extraction order is page order, then operator order,
which matches reading order for linear business documents.
"""
from __future__ import annotations

import base64
import binascii
import re
import zlib
from dataclasses import dataclass, field

from ..errors import UnsupportedFormat

_WHITESPACE = b"\x00\t\n\x0c\r "
_DELIMITERS = b"()<>[]{}/%"
_HEADER_RE = re.compile(rb"(\d+)\s+(\d+)\s+obj(?![0-9A-Za-z])")
_NUMBER_RE = re.compile(rb"[+-]?(?:\d+\.?\d*|\.\d+)")


class PdfName(str):
    """A /Name token; subclassing str keeps dict keys cheap to compare."""


@dataclass(frozen=True)
class Ref:
    num: int
    gen: int


class _Lexer:
    """Token reader over raw PDF bytes (also used for content streams)."""

    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def _skip_ws(self) -> None:
        data, n = self.data, len(self.data)
        while self.pos < n:
            ch = data[self.pos]
            if ch in _WHITESPACE:
                self.pos += 1
            elif ch == 0x25:  # '%' comment runs to end of line
                nl = data.find(b"\n", self.pos)
                self.pos = n if nl < 0 else nl + 1
            else:
                return

    def peek_byte(self) -> int | None:
        self._skip_ws()
        if self.pos >= len(self.data):
            return None
        return self.data[self.pos]

    def read_token(self):
        """Next syntactic token: value object, PdfName, or operator str."""
        self._skip_ws()
        data, pos = self.data, self.pos
        if pos >= len(data):
            return None
        ch = data[pos]
        if ch == 0x2F:  # /
            return self._read_name()
        if ch == 0x28:  # (
            return self._read_literal_string()
        if ch == 0x3C:  # <
            if data[pos : pos + 2] == b"<<":
                self.pos += 2
                return "<<"
            return self._read_hex_string()
        if ch == 0x3E:  # >
            if data[pos : pos + 2] == b">>":
                self.pos += 2
                return ">>"
            raise UnsupportedFormat("stray '>' in PDF data")
        if ch == 0x5B:  # [
            self.pos += 1
            return "["
        if ch == 0x5D:  # ]
            self.pos += 1
            return "]"
        if ch == 0x7B:  # { — postscript procs in functions; treat as operator
            self.pos += 1
            return "{"
        if ch == 0x7D:
            self.pos += 1
            return "}"
        m = _NUMBER_RE.match(data, pos)
        if m and (ch in b"+-.0123456789"):
            self.pos = m.end()
            text = m.group().decode("ascii")
            return float(text) if (b"." in m.group()) else int(text)
        # bare keyword / operator
        end = pos
        while end < len(data) and data[end] not in _WHITESPACE and data[end] not in _DELIMITERS:
            end += 1
        if end == pos:
            raise UnsupportedFormat(f"unparseable byte 0x{ch:02x} in PDF data")
        self.pos = end
        word = data[pos:end].decode("latin-1")
        if word == "true":
            return True
        if word == "false":
            return False
        if word == "null":
            return None
        return word  # operator or keyword (obj, R, stream, BT, Tj, ...)

    def _read_name(self) -> PdfName:
        data = self.data
        pos = self.pos + 1
        end = pos
        while end < len(data) and data[end] not in _WHITESPACE and data[end] not in _DELIMITERS:
            end += 1
        raw = data[pos:end]
        self.pos = end
        # #xx hex escapes inside names
        if b"#" in raw:
            out = bytearray()
            i = 0
            while i < len(raw):
                if raw[i : i + 1] == b"#" and i + 3 <= len(raw):
                    try:
                        out.append(int(raw[i + 1 : i + 3], 16))
                        i += 3
                        continue
                    except ValueError:
                        pass
                out.append(raw[i])
                i += 1
            raw = bytes(out)
        return PdfName(raw.decode("latin-1"))

    def _read_literal_string(self) -> bytes:
        data = self.data
        pos = self.pos + 1
        out = bytearray()
        depth = 1
        while pos < len(data):
            ch = data[pos]
            if ch == 0x5C:  # backslash escape
                pos += 1
                if pos >= len(data):
                    break
                esc = data[pos]
                simple = {0x6E: 10, 0x72: 13, 0x74: 9, 0x62: 8, 0x66: 12,
                          0x28: 0x28, 0x29: 0x29, 0x5C: 0x5C}
                if esc in simple:
                    out.append(simple[esc])
                    pos += 1
                elif 0x30 <= esc <= 0x37:  # octal, up to 3 digits
                    oct_digits = bytearray([esc])
                    pos += 1
                    while pos < len(data) and len(oct_digits) < 3 and 0x30 <= data[pos] <= 0x37:
                        oct_digits.append(data[pos])
                        pos += 1
                    out.append(int(oct_digits, 8) & 0xFF)
                elif esc in (0x0A, 0x0D):  # line continuation
                    pos += 1
                    if esc == 0x0D and pos < len(data) and data[pos] == 0x0A:
                        pos += 1
                else:
                    out.append(esc)
                    pos += 1
            elif ch == 0x28:
                depth += 1
                out.append(ch)
                pos += 1
            elif ch == 0x29:
                depth -= 1
                if depth == 0:
                    pos += 1
                    break
                out.append(ch)
                pos += 1
            else:
                out.append(ch)
                pos += 1
        self.pos = pos
        return bytes(out)

    def _read_hex_string(self) -> bytes:
        data = self.data
        end = data.find(b">", self.pos + 1)
        if end < 0:
            raise UnsupportedFormat("unterminated hex string")
        hexdigits = re.sub(rb"[^0-9A-Fa-f]", b"", data[self.pos + 1 : end])
        self.pos = end + 1
        if len(hexdigits) % 2:
            hexdigits += b"0"
        return bytes.fromhex(hexdigits.decode("ascii"))

    def read_object(self):
        """Read a full value (resolving composite syntax, not references)."""
        tok = self.read_token()
        return self._finish_object(tok)

    def _finish_object(self, tok):
        if tok == "<<":
            d: dict[str, object] = {}
            while True:
                key = self.read_token()
                if key == ">>":
                    return d
                if not isinstance(key, PdfName):
                    raise UnsupportedFormat("dictionary key is not a name")
                d[str(key)] = self._read_value()
            # unreachable
        if tok == "[":
            arr: list[object] = []
            while True:
                item = self.read_token()
                if item == "]":
                    return arr
                arr.append(self._maybe_ref(self._finish_object(item)))
        return tok

    def _read_value(self):
        return self._maybe_ref(self.read_object())

    def _maybe_ref(self, value):
        """Collapse `num gen R` into a Ref (two-token lookahead)."""
        if not isinstance(value, int):
            return value
        save = self.pos
        try:
            gen = self.read_token()
            if isinstance(gen, int) and self.read_token() == "R":
                return Ref(value, gen)
        except UnsupportedFormat:
            pass
        self.pos = save
        return value


@dataclass
class _Font:
    composite: bool = False
    cmap: dict[bytes, str] = field(default_factory=dict)
    code_lengths: tuple[int, ...] = ()

    def decode(self, raw: bytes) -> str:
        if not self.cmap:
            if self.composite:
                return ""  # unmapped CIDs carry no text
            return raw.decode("latin-1", "replace")
        lengths = self.code_lengths or ((2,) if self.composite else (1,))
        out: list[str] = []
        i = 0
        while i < len(raw):
            matched = False
            for L in lengths:
                code = raw[i : i + L]
                if code in self.cmap:
                    out.append(self.cmap[code])
                    i += L
                    matched = True
                    break
            if not matched:
                i += max(lengths) if self.composite else 1
        return "".join(out)


class _PdfDocument:
    def __init__(self, data: bytes):
        self.data = data
        self.objects: dict[int, object] = {}
        self.streams: dict[int, bytes] = {}  # raw (undecoded) stream bytes
        self._scan_objects()
        self._expand_object_streams()

    # -- object collection ---------------------------------------------------

    def _scan_objects(self) -> None:
        data = self.data
        pos = 0
        while True:
            m = _HEADER_RE.search(data, pos)
            if not m:
                break
            num = int(m.group(1))
            lex = _Lexer(data, m.end())
            try:
                value = lex._read_value()
            except UnsupportedFormat:
                pos = m.start() + 1
                continue
            end = lex.pos
            # stream payload follows the dict, if any
            tail = _Lexer(data, end)
            save = tail.pos
            kw = None
            try:
                kw = tail.read_token()
            except UnsupportedFormat:
                pass
            if kw == "stream" and isinstance(value, dict):
                spos = tail.pos
                if data[spos : spos + 2] == b"\r\n":
                    spos += 2
                elif data[spos : spos + 1] in (b"\n", b"\r"):
                    spos += 1
                length = value.get("Length")
                body = None
                if isinstance(length, int):
                    cand_end = spos + length
                    after = data[cand_end : cand_end + 20]
                    if b"endstream" in after:
                        body = data[spos:cand_end]
                if body is None:
                    send = data.find(b"endstream", spos)
                    if send < 0:
                        pos = m.start() + 1
                        continue
                    body = data[spos:send].rstrip(b"\r\n")
                self.streams[num] = body
                end = data.find(b"endstream", spos + len(body)) + len(b"endstream")
            else:
                tail.pos = save
                end = save
            self.objects[num] = value
            pos = end

    def _expand_object_streams(self) -> None:
        for num, value in list(self.objects.items()):
            if not (isinstance(value, dict) and value.get("Type") == PdfName("ObjStm")):
                continue
            try:
                payload = self._decoded_stream(num)
            except UnsupportedFormat:
                continue
            count = self.resolve(value.get("N"))
            first = self.resolve(value.get("First"))
            if not isinstance(count, int) or not isinstance(first, int):
                continue
            head = _Lexer(payload)
            pairs: list[tuple[int, int]] = []
            ok = True
            for _ in range(count):
                onum = head.read_token()
                ooff = head.read_token()
                if not isinstance(onum, int) or not isinstance(ooff, int):
                    ok = False
                    break
                pairs.append((onum, ooff))
            if not ok:
                continue
            for onum, ooff in pairs:
                if onum in self.objects:
                    continue  # top-level definitions win
                lex = _Lexer(payload, first + ooff)
                try:
                    self.objects[onum] = lex._read_value()
                except UnsupportedFormat:
                    continue

    # -- helpers ---------------------------------------------------------------

    def resolve(self, value, _depth: int = 0):
        while isinstance(value, Ref) and _depth < 32:
            value = self.objects.get(value.num)
            _depth += 1
        return value

    def _decoded_stream(self, num: int) -> bytes:
        raw = self.streams.get(num)
        meta = self.objects.get(num)
        if raw is None or not isinstance(meta, dict):
            raise UnsupportedFormat(f"object {num} has no stream")
        filters = self.resolve(meta.get("Filter"))
        if filters is None:
            return raw
        if not isinstance(filters, list):
            filters = [filters]
        params = self.resolve(meta.get("DecodeParms"))
        if not isinstance(params, list):
            params = [params] * len(filters)
        out = raw
        for filt, parm in zip(filters, params):
            filt = self.resolve(filt)
            if filt == PdfName("FlateDecode") or filt == PdfName("Fl"):
                try:
                    out = zlib.decompress(out)
                except zlib.error as exc:
                    raise UnsupportedFormat(f"bad Flate stream in object {num}") from exc
                out = _apply_predictor(out, self.resolve(parm) if parm else None, self)
            elif filt == PdfName("ASCII85Decode") or filt == PdfName("A85"):
                try:
                    out = base64.a85decode(out.strip(), adobe=True)
                except ValueError as exc:
                    raise UnsupportedFormat(f"bad ASCII85 stream in object {num}") from exc
            elif filt == PdfName("ASCIIHexDecode") or filt == PdfName("AHx"):
                digits = b"".join(out.split(b">")[0].split())
                if len(digits) % 2:  # odd count implies a trailing zero digit
                    digits += b"0"
                try:
                    out = binascii.unhexlify(digits)
                except binascii.Error as exc:
                    raise UnsupportedFormat(f"bad ASCIIHex stream in object {num}") from exc
            else:
                raise UnsupportedFormat(f"unsupported stream filter {filt!r}")
        return out

    # -- page tree ---------------------------------------------------------------

    def pages(self) -> list[dict]:
        root = None
        for value in self.objects.values():
            if isinstance(value, dict) and value.get("Type") == PdfName("Catalog"):
                root = value
                break
        ordered: list[dict] = []
        if root is not None:
            self._walk_pages(self.resolve(root.get("Pages")), ordered, set())
        if not ordered:  # fall back to file order
            for value in self.objects.values():
                if isinstance(value, dict) and value.get("Type") == PdfName("Page"):
                    ordered.append(value)
        return ordered

    def _walk_pages(self, node, out: list[dict], seen: set[int]) -> None:
        node = self.resolve(node)
        if not isinstance(node, dict) or id(node) in seen:
            return
        seen.add(id(node))
        if node.get("Type") == PdfName("Page"):
            out.append(node)
            return
        kids = self.resolve(node.get("Kids"))
        if isinstance(kids, list):
            for kid in kids:
                self._walk_pages(kid, out, seen)

    def page_content(self, page: dict) -> bytes:
        contents = self.resolve(page.get("Contents"))
        refs: list[Ref] = []
        raw_contents = page.get("Contents")
        if isinstance(raw_contents, Ref):
            resolved = self.resolve(raw_contents)
            if isinstance(resolved, list):
                refs = [c for c in resolved if isinstance(c, Ref)]
            else:
                refs = [raw_contents]
        elif isinstance(contents, list):
            refs = [c for c in contents if isinstance(c, Ref)]
        parts = []
        for ref in refs:
            try:
                parts.append(self._decoded_stream(ref.num))
            except UnsupportedFormat:
                continue
        return b"\n".join(parts)

    def page_fonts(self, page: dict) -> dict[str, _Font]:
        resources = self.resolve(page.get("Resources"))
        if not isinstance(resources, dict):
            return {}
        fonts = self.resolve(resources.get("Font"))
        if not isinstance(fonts, dict):
            return {}
        out: dict[str, _Font] = {}
        for name, ref in fonts.items():
            fdict = self.resolve(ref)
            if not isinstance(fdict, dict):
                continue
            composite = fdict.get("Subtype") == PdfName("Type0")
            font = _Font(composite=composite)
            tou = fdict.get("ToUnicode")
            if isinstance(tou, Ref):
                try:
                    font.cmap, font.code_lengths = _parse_tounicode(
                        self._decoded_stream(tou.num)
                    )
                except UnsupportedFormat:
                    pass
            out[name] = font
        return out


def _apply_predictor(data: bytes, parms, doc: _PdfDocument) -> bytes:
    if not isinstance(parms, dict):
        return data
    predictor = doc.resolve(parms.get("Predictor", 1))
    if not isinstance(predictor, int) or predictor < 2:
        return data
    columns = doc.resolve(parms.get("Columns", 1)) or 1
    colors = doc.resolve(parms.get("Colors", 1)) or 1
    bpc = doc.resolve(parms.get("BitsPerComponent", 8)) or 8
    bpp = max(1, (colors * bpc) // 8)
    row_len = (columns * colors * bpc + 7) // 8
    if predictor < 10:  # TIFF predictor: not produced by the writers we meet
        return data
    out = bytearray()
    prev = bytearray(row_len)
    pos = 0
    while pos + 1 + row_len <= len(data) + row_len:  # tolerate short last row
        if pos >= len(data):
            break
        ftype = data[pos]
        row = bytearray(data[pos + 1 : pos + 1 + row_len])
        pos += 1 + len(row)
        for i in range(len(row)):
            left = row[i - bpp] if i >= bpp else 0
            up = prev[i] if i < len(prev) else 0
            up_left = prev[i - bpp] if i >= bpp and i - bpp < len(prev) else 0
            if ftype == 1:
                row[i] = (row[i] + left) & 0xFF
            elif ftype == 2:
                row[i] = (row[i] + up) & 0xFF
            elif ftype == 3:
                row[i] = (row[i] + (left + up) // 2) & 0xFF
            elif ftype == 4:
                p = left + up - up_left
                pa, pb, pc = abs(p - left), abs(p - up), abs(p - up_left)
                pred = left if (pa <= pb and pa <= pc) else (up if pb <= pc else up_left)
                row[i] = (row[i] + pred) & 0xFF
        out.extend(row)
        prev = row
    return bytes(out)


def _parse_tounicode(payload: bytes) -> tuple[dict[bytes, str], tuple[int, ...]]:
    cmap: dict[bytes, str] = {}
    lex = _Lexer(payload)
    stack: list[object] = []
    while True:
        try:
            tok = lex.read_token()
        except UnsupportedFormat:
            break
        if tok is None:
            break
        if tok == "beginbfchar":
            stack.clear()
            while True:
                src = lex.read_token()
                if src == "endbfchar" or src is None:
                    break
                dst = lex.read_token()
                if isinstance(src, bytes) and isinstance(dst, bytes):
                    cmap[src] = _utf16be(dst)
        elif tok == "beginbfrange":
            while True:
                lo = lex.read_token()
                if lo == "endbfrange" or lo is None:
                    break
                hi = lex.read_token()
                dst = lex.read_token()
                if dst == "[":
                    dst = lex._finish_object("[")
                if not (isinstance(lo, bytes) and isinstance(hi, bytes)):
                    continue
                lo_i, hi_i = int.from_bytes(lo, "big"), int.from_bytes(hi, "big")
                width = len(lo)
                if isinstance(dst, list):
                    for k, item in enumerate(dst):
                        if lo_i + k > hi_i or not isinstance(item, bytes):
                            break
                        cmap[(lo_i + k).to_bytes(width, "big")] = _utf16be(item)
                elif isinstance(dst, bytes):
                    base = int.from_bytes(dst, "big")
                    for k in range(hi_i - lo_i + 1):
                        code = (lo_i + k).to_bytes(width, "big")
                        cmap[code] = _utf16be_from_int(base + k, len(dst))
        elif tok == "<<":
            lex._finish_object("<<")
    lengths = tuple(sorted({len(k) for k in cmap}, reverse=True))
    return cmap, lengths


def _utf16be(raw: bytes) -> str:
    if len(raw) % 2:
        raw += b"\x00"
    try:
        return raw.decode("utf-16-be")
    except UnicodeDecodeError:
        return raw.decode("utf-16-be", "ignore")


def _utf16be_from_int(value: int, width: int) -> str:
    width = max(2, width)
    try:
        return _utf16be(value.to_bytes(width, "big"))
    except OverflowError:
        return ""


def _extract_page_text(content: bytes, fonts: dict[str, _Font]) -> str:
    lex = _Lexer(content)
    operands: list[object] = []
    lines: list[str] = [""]
    font = _Font()
    last_y: float | None = None

    def newline() -> None:
        if lines[-1]:
            lines.append("")

    def show(raw: object) -> None:
        if isinstance(raw, bytes):
            lines[-1] += font.decode(raw)

    while True:
        try:
            tok = lex.read_token()
        except UnsupportedFormat:
            break
        if tok is None:
            break
        if isinstance(tok, str) and not isinstance(tok, PdfName) and tok not in ("<<", "[", "]"):
            op = tok
            if op == "BI":  # inline image: skip to EI
                end = lex.data.find(b"EI", lex.pos)
                lex.pos = len(lex.data) if end < 0 else end + 2
                operands.clear()
                continue
            if op == "Tf" and len(operands) >= 2 and isinstance(operands[-2], PdfName):
                font = fonts.get(str(operands[-2]), _Font())
            elif op == "Td" or op == "TD":
                if len(operands) >= 1 and isinstance(operands[-1], (int, float)) and operands[-1] != 0:
                    newline()
                    if last_y is not None:
                        last_y += float(operands[-1])
            elif op == "T*":
                newline()
            elif op == "Tm" and len(operands) >= 6:
                y = operands[-1]
                if isinstance(y, (int, float)):
                    if last_y is not None and abs(float(y) - last_y) > 1e-6:
                        newline()
                    last_y = float(y)
            elif op == "Tj":
                if operands:
                    show(operands[-1])
            elif op == "'":
                newline()
                if operands:
                    show(operands[-1])
            elif op == '"':
                newline()
                if operands:
                    show(operands[-1])
            elif op == "TJ":
                if operands and isinstance(operands[-1], list):
                    for item in operands[-1]:
                        if isinstance(item, bytes):
                            show(item)
                        elif isinstance(item, (int, float)) and item <= -180:
                            lines[-1] += " "  # large kern gap reads as a space
            elif op == "BT":
                pass  # text objects share page-level line state
            operands.clear()
        else:
            if tok == "<<":
                operands.append(lex._finish_object("<<"))
            elif tok == "[":
                operands.append(lex._finish_object("["))
            else:
                operands.append(tok)

    return "\n".join(line.rstrip() for line in lines if line.strip())


_ENCRYPT_RE = re.compile(rb"/Encrypt\s+\d+\s+\d+\s+R")


def extract_pdf_text(data: bytes) -> str:
    """Extract page text in reading order; raises UnsupportedFormat when the
    payload is not a parseable, unencrypted PDF."""
    if not data.lstrip()[:5].startswith(b"%PDF-"):
        raise UnsupportedFormat("missing %PDF header")
    if _ENCRYPT_RE.search(data):
        raise UnsupportedFormat("encrypted PDFs are not supported")
    doc = _PdfDocument(data)
    pages = doc.pages()
    if not pages:
        raise UnsupportedFormat("no pages found in PDF")
    texts = []
    for page in pages:
        content = doc.page_content(page)
        if not content:
            continue
        texts.append(_extract_page_text(content, doc.page_fonts(page)))
    return "\n".join(t for t in texts if t)
