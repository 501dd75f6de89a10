/** Annotation document model shared by the editor, parser, and serializer. */

export interface Vertex {
  x: number;
  y: number;
}

export interface PolygonPath {
  /** Closed polygon outline; always holds at least 3 vertices. */
  vertices: Vertex[];
}

export interface LabeledObject {
  name: string;
  user: string;
  /** One polygon per disjoint blob of the labeled region. */
  polygons: PolygonPath[];
}

export interface AnnotationDocument {
  filename: string;
  width: number;
  height: number;
  objects: LabeledObject[];
}

export class AnnotationError extends Error {}

export function cloneDocument(doc: AnnotationDocument): AnnotationDocument {
  return {
    filename: doc.filename,
    width: doc.width,
    height: doc.height,
    objects: doc.objects.map((obj) => ({
      name: obj.name,
      user: obj.user,
      polygons: obj.polygons.map((poly) => ({
        vertices: poly.vertices.map((v) => ({ x: v.x, y: v.y })),
      })),
    })),
  };
}

/** Distinct annotator ids in first-appearance order. */
export function documentUsers(doc: AnnotationDocument): string[] {
  const seen: string[] = [];
  for (const obj of doc.objects) {
    if (!seen.includes(obj.user)) seen.push(obj.user);
  }
  return seen;
}

/** Distinct labels in first-appearance order. */
export function documentLabels(doc: AnnotationDocument): string[] {
  const seen: string[] = [];
  for (const obj of doc.objects) {
    if (!seen.includes(obj.name)) seen.push(obj.name);
  }
  return seen;
}
