/** Writes the fixture exports to frontend/fixtures/.  Run via `npm run fixtures`. */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { buildFixtures } from "./fixtureDefs.js";

const here = dirname(fileURLToPath(import.meta.url));
// here = <frontend>/dist/scripts after compilation
const outDir = join(here, "..", "..", "fixtures");
mkdirSync(outDir, { recursive: true });
for (const [name, xml] of buildFixtures()) {
  writeFileSync(join(outDir, name), xml, "utf8");
  console.log(`wrote fixtures/${name}`);
}
