import { readFileSync, readdirSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { buildFixtures } from "../scripts/fixtureDefs.js";
import { parseAnnotation, serializeAnnotation } from "../src/xml.js";

const FIXTURE_DIR = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");

describe("committed fixture exports", () => {
  const built = buildFixtures();

  it("cover exactly the five committed files", () => {
    const onDisk = readdirSync(FIXTURE_DIR).filter((f) => f.endsWith(".xml")).sort();
    expect(onDisk).toEqual([...built.keys()].sort());
    expect(onDisk).toHaveLength(5);
  });

  for (const name of [
    "triangle.xml",
    "two_users.xml",
    "subpixel.xml",
    "multi_blob.xml",
    "palette.xml",
  ]) {
    it(`${name} matches a fresh export byte for byte`, () => {
      const committed = readFileSync(join(FIXTURE_DIR, name), "utf8");
      expect(built.get(name)).toBe(committed);
    });

    it(`${name} parses with zero warnings and re-serializes identically`, () => {
      const committed = readFileSync(join(FIXTURE_DIR, name), "utf8");
      const { doc, warnings } = parseAnnotation(committed);
      expect(warnings).toEqual([]);
      expect(serializeAnnotation(doc)).toBe(committed);
    });
  }
});
