/** Canonical annotation XML: parser and byte-stable serializer.
 *
 * Schema::
 *
 *   <annotation>
 *     <filename>...</filename>
 *     <size width="..." height="..."/>
 *     <object>
 *       <name>road</name>
 *       <user>u1</user>
 *       <polygon><pt x="..." y="..."/>...</polygon>
 *     </object>
 *   </annotation>
 *
 * The serializer reproduces the benchmark's canonical formatting byte for
 * byte (two-space indent steps, shortest round-trip coordinate notation),
 * so exports are directly diffable against files written by the Python
 * side.  The parser is a small hand-rolled reader because the same code
 * must run in the browser and under node test runners, where no common
 * DOM implementation exists.
 */

import {
  AnnotationDocument,
  AnnotationError,
  LabeledObject,
  PolygonPath,
} from "./model.js";

// ---------------------------------------------------------------------------
// Coordinate formatting
// ---------------------------------------------------------------------------

/** Shortest decimal notation that round-trips through a float64 parser.
 *
 * Integral values keep a trailing ".0" and exponents are two digits with an
 * explicit sign, matching the benchmark's writer.  Coordinates are bounded
 * by the image size, so the huge magnitudes where notations could diverge
 * (|v| >= 1e16) never occur.
 */
export function formatCoord(v: number): string {
  if (!Number.isFinite(v)) {
    throw new AnnotationError(`non-finite coordinate ${v}`);
  }
  if (Number.isInteger(v) && Math.abs(v) < 1e16) {
    const digits = Math.abs(v).toFixed(1);
    return v < 0 || Object.is(v, -0) ? `-${digits}` : digits;
  }
  const s = String(v);
  const m = s.match(/^(-?[0-9.]+)e([+-]?)([0-9]+)$/);
  if (m) {
    const sign = m[2] === "-" ? "-" : "+";
    const exp = m[3]!.padStart(2, "0");
    return `${m[1]}e${sign}${exp}`;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

export function serializeAnnotation(doc: AnnotationDocument): string {
  if (!doc.filename || doc.width <= 0 || doc.height <= 0) {
    throw new AnnotationError("document invariants violated (size/filename)");
  }
  const lines: string[] = ["<annotation>"];
  lines.push(`  <filename>${doc.filename}</filename>`);
  lines.push(`  <size width="${doc.width}" height="${doc.height}"/>`);
  for (const obj of doc.objects) {
    if (obj.polygons.length === 0) {
      throw new AnnotationError(`object ${JSON.stringify(obj.name)} has no polygons`);
    }
    lines.push("  <object>");
    lines.push(`    <name>${obj.name}</name>`);
    lines.push(`    <user>${obj.user}</user>`);
    for (const poly of obj.polygons) {
      if (poly.vertices.length < 3) {
        throw new AnnotationError(
          `polygon in object ${JSON.stringify(obj.name)} has < 3 vertices`,
        );
      }
      lines.push("    <polygon>");
      for (const v of poly.vertices) {
        lines.push(`      <pt x="${formatCoord(v.x)}" y="${formatCoord(v.y)}"/>`);
      }
      lines.push("    </polygon>");
    }
    lines.push("  </object>");
  }
  lines.push("</annotation>");
  return lines.join("\n") + "\n";
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

interface XmlNode {
  tag: string;
  attrs: Record<string, string>;
  children: XmlNode[];
  text: string;
}

const ENTITIES: Record<string, string> = {
  lt: "<",
  gt: ">",
  amp: "&",
  quot: '"',
  apos: "'",
};

function decodeEntities(s: string): string {
  return s.replace(/&(lt|gt|amp|quot|apos|#x?[0-9a-fA-F]+);/g, (_, name: string) => {
    if (name.startsWith("#x") || name.startsWith("#X")) {
      return String.fromCodePoint(parseInt(name.slice(2), 16));
    }
    if (name.startsWith("#")) {
      return String.fromCodePoint(parseInt(name.slice(1), 10));
    }
    return ENTITIES[name]!;
  });
}

class XmlReader {
  private pos = 0;

  constructor(private readonly src: string) {}

  parseDocument(): XmlNode {
    this.skipProlog();
    const root = this.parseElement();
    this.skipMisc();
    if (this.pos !== this.src.length) {
      throw new AnnotationError("malformed XML: content after document element");
    }
    return root;
  }

  private fail(reason: string): never {
    throw new AnnotationError(`malformed XML: ${reason} at offset ${this.pos}`);
  }

  private skipProlog(): void {
    this.skipMisc();
    if (this.src.startsWith("<?xml", this.pos)) {
      const end = this.src.indexOf("?>", this.pos);
      if (end < 0) this.fail("unterminated XML declaration");
      this.pos = end + 2;
      this.skipMisc();
    }
  }

  private skipMisc(): void {
    for (;;) {
      while (this.pos < this.src.length && /\s/.test(this.src[this.pos]!)) this.pos += 1;
      if (this.src.startsWith("<!--", this.pos)) {
        const end = this.src.indexOf("-->", this.pos);
        if (end < 0) this.fail("unterminated comment");
        this.pos = end + 3;
        continue;
      }
      return;
    }
  }

  private readName(): string {
    const m = /^[A-Za-z_][A-Za-z0-9_.:-]*/.exec(this.src.slice(this.pos));
    if (!m) this.fail("expected a name");
    this.pos += m[0].length;
    return m[0];
  }

  private parseElement(): XmlNode {
    if (this.src[this.pos] !== "<") this.fail("expected '<'");
    this.pos += 1;
    const tag = this.readName();
    const attrs: Record<string, string> = {};
    for (;;) {
      while (this.pos < this.src.length && /\s/.test(this.src[this.pos]!)) this.pos += 1;
      const ch = this.src[this.pos];
      if (ch === "/") {
        if (this.src[this.pos + 1] !== ">") this.fail("expected '/>'");
        this.pos += 2;
        return { tag, attrs, children: [], text: "" };
      }
      if (ch === ">") {
        this.pos += 1;
        break;
      }
      if (ch === undefined) this.fail("unterminated start tag");
      const name = this.readName();
      if (this.src[this.pos] !== "=") this.fail("expected '=' in attribute");
      this.pos += 1;
      const quote = this.src[this.pos];
      if (quote !== '"' && quote !== "'") this.fail("expected quoted attribute value");
      this.pos += 1;
      const end = this.src.indexOf(quote, this.pos);
      if (end < 0) this.fail("unterminated attribute value");
      attrs[name] = decodeEntities(this.src.slice(this.pos, end));
      this.pos = end + 1;
    }

    const children: XmlNode[] = [];
    let text = "";
    for (;;) {
      const lt = this.src.indexOf("<", this.pos);
      if (lt < 0) this.fail(`unterminated <${tag}> element`);
      text += decodeEntities(this.src.slice(this.pos, lt));
      this.pos = lt;
      if (this.src.startsWith("<!--", this.pos)) {
        const end = this.src.indexOf("-->", this.pos);
        if (end < 0) this.fail("unterminated comment");
        this.pos = end + 3;
        continue;
      }
      if (this.src.startsWith("</", this.pos)) {
        this.pos += 2;
        const closing = this.readName();
        if (closing !== tag) this.fail(`mismatched </${closing}> closing <${tag}>`);
        while (this.pos < this.src.length && /\s/.test(this.src[this.pos]!)) this.pos += 1;
        if (this.src[this.pos] !== ">") this.fail("expected '>'");
        this.pos += 1;
        return { tag, attrs, children, text };
      }
      children.push(this.parseElement());
    }
  }
}

function childText(node: XmlNode, tag: string): string | undefined {
  const child = node.children.find((c) => c.tag === tag);
  return child === undefined ? undefined : child.text.trim();
}

export interface ParsedAnnotation {
  doc: AnnotationDocument;
  /** Unknown elements encountered while parsing, mirrored into messages. */
  warnings: string[];
}

export function parseAnnotation(text: string): ParsedAnnotation {
  const root = new XmlReader(text).parseDocument();
  if (root.tag !== "annotation") {
    throw new AnnotationError(`expected <annotation> root, got <${root.tag}>`);
  }
  const warnings: string[] = [];

  const filename = childText(root, "filename");
  if (!filename) throw new AnnotationError("missing <filename>");
  const size = root.children.find((c) => c.tag === "size");
  if (size === undefined || !("width" in size.attrs) || !("height" in size.attrs)) {
    throw new AnnotationError("missing <size width height>");
  }
  const width = Number(size.attrs["width"]);
  const height = Number(size.attrs["height"]);
  if (!Number.isInteger(width) || !Number.isInteger(height) || width <= 0 || height <= 0) {
    throw new AnnotationError(`non-positive image size ${size.attrs["width"]}x${size.attrs["height"]}`);
  }

  const objects: LabeledObject[] = [];
  for (const child of root.children) {
    if (child.tag === "filename" || child.tag === "size") continue;
    if (child.tag !== "object") {
      warnings.push(`ignored unknown element <${child.tag}>`);
      continue;
    }
    const name = childText(child, "name") ?? "";
    const user = childText(child, "user") ?? "";
    if (!name) throw new AnnotationError(`object ${objects.length} is missing <name>`);
    const polygons: PolygonPath[] = [];
    for (const sub of child.children) {
      if (sub.tag === "name" || sub.tag === "user") continue;
      if (sub.tag !== "polygon") {
        warnings.push(`ignored unknown element <${sub.tag}> in object ${JSON.stringify(name)}`);
        continue;
      }
      const vertices = [];
      for (const pt of sub.children) {
        if (pt.tag !== "pt") {
          warnings.push(`ignored unknown element <${pt.tag}> in polygon`);
          continue;
        }
        const x = Number(pt.attrs["x"]);
        const y = Number(pt.attrs["y"]);
        if (pt.attrs["x"] === undefined || pt.attrs["y"] === undefined || Number.isNaN(x) || Number.isNaN(y)) {
          throw new AnnotationError(`bad <pt> in object ${JSON.stringify(name)}`);
        }
        vertices.push({ x, y });
      }
      if (vertices.length < 3) {
        throw new AnnotationError(
          `polygon ${polygons.length} of object ${JSON.stringify(name)} has ${vertices.length} < 3 vertices`,
        );
      }
      polygons.push({ vertices });
    }
    if (polygons.length === 0) {
      throw new AnnotationError(`object ${JSON.stringify(name)} has no polygons`);
    }
    objects.push({ name, user, polygons });
  }

  return { doc: { filename, width, height, objects }, warnings };
}
