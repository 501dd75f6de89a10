/** Exported-XML fixtures, built through the editing API so the committed
 * files always reflect what the tool actually produces. */

import { AnnotationSession } from "../src/session.js";

function draw(session: AnnotationSession, vertices: [number, number][]): void {
  for (const [x, y] of vertices) {
    if (!session.addVertex(x, y)) {
      throw new Error(`fixture vertex (${x}, ${y}) out of bounds`);
    }
  }
  if (!session.closePolygon()) {
    throw new Error("fixture polygon failed to close");
  }
}

export function buildFixtures(): Map<string, string> {
  const out = new Map<string, string>();

  // The documented triangle scenario: three clicks and a close.
  const triangle = new AnnotationSession("frame_000.png", 210, 100, {
    user: "expert",
    label: "road",
  });
  draw(triangle, [
    [10, 90],
    [100, 95],
    [55.5, 40.25],
  ]);
  out.set("triangle.xml", triangle.exportXml());

  // Two annotators labeling the same image.
  const twoUsers = new AnnotationSession("frame_001.png", 210, 100, {
    user: "alice",
    label: "road",
  });
  draw(twoUsers, [
    [0, 99],
    [209, 99],
    [180, 55],
    [30, 55],
  ]);
  twoUsers.activeUser = "bob";
  twoUsers.activeLabel = "car";
  draw(twoUsers, [
    [120, 40],
    [150, 40],
    [150, 60],
    [120, 60],
  ]);
  out.set("two_users.xml", twoUsers.exportXml());

  // Sub-pixel coordinates survive the round trip.
  const subpixel = new AnnotationSession("frame_002.png", 210, 100, {
    user: "expert",
    label: "road",
  });
  draw(subpixel, [
    [10.5, 90.25],
    [1 / 3, 99.75],
    [0.1 + 0.2, 40.125],
  ]);
  out.set("subpixel.xml", subpixel.exportXml());

  // Two disjoint blobs of the same label land in one object.
  const multiBlob = new AnnotationSession("frame_003.png", 210, 100, {
    user: "expert",
    label: "road",
  });
  draw(multiBlob, [
    [5, 95],
    [90, 95],
    [60, 50],
  ]);
  draw(multiBlob, [
    [120, 95],
    [205, 95],
    [170, 50],
  ]);
  out.set("multi_blob.xml", multiBlob.exportXml());

  // Default palette plus a free-text label.
  const palette = new AnnotationSession("frame_004.png", 210, 100, {
    user: "expert",
    label: "road",
  });
  draw(palette, [
    [0, 99],
    [209, 99],
    [105, 60],
  ]);
  palette.activeLabel = "car";
  draw(palette, [
    [20, 50],
    [60, 50],
    [40, 70],
  ]);
  palette.activeLabel = "sky";
  draw(palette, [
    [0, 0],
    [209, 0],
    [105, 20],
  ]);
  palette.activeLabel = "other";
  draw(palette, [
    [80, 30],
    [110, 30],
    [95, 45],
  ]);
  palette.activeLabel = "tree";
  draw(palette, [
    [150, 25],
    [180, 25],
    [165, 48],
  ]);
  out.set("palette.xml", palette.exportXml());

  return out;
}
