/** Editing session: one image, one working document, an undo stack. */

import {
  AnnotationDocument,
  AnnotationError,
  Vertex,
  cloneDocument,
} from "./model.js";
import { parseAnnotation, serializeAnnotation } from "./xml.js";

export const DEFAULT_LABELS = ["road", "car", "sky", "other"] as const;

type UndoEntry =
  | { kind: "vertex" }
  | {
      kind: "close";
      vertices: Vertex[];
      objectIndex: number;
      createdObject: boolean;
    };

export class AnnotationSession {
  readonly imageName: string;
  readonly width: number;
  readonly height: number;
  document: AnnotationDocument;
  activeUser: string;
  activeLabel: string;
  inProgress: Vertex[] = [];
  private undoStack: UndoEntry[] = [];

  constructor(
    imageName: string,
    width: number,
    height: number,
    options: { user?: string; label?: string; existingXml?: string } = {},
  ) {
    if (!imageName || width <= 0 || height <= 0) {
      throw new AnnotationError(`bad image ${JSON.stringify(imageName)} (${width}x${height})`);
    }
    this.imageName = imageName;
    this.width = width;
    this.height = height;
    this.activeUser = options.user ?? "anonymous";
    this.activeLabel = options.label ?? DEFAULT_LABELS[0];
    if (options.existingXml !== undefined) {
      const { doc } = parseAnnotation(options.existingXml);
      if (doc.width !== width || doc.height !== height) {
        throw new AnnotationError(
          `annotation size ${doc.width}x${doc.height} does not match image ${width}x${height}`,
        );
      }
      this.document = { ...doc, filename: imageName };
    } else {
      this.document = { filename: imageName, width, height, objects: [] };
    }
  }

  /** Append an in-progress vertex.  Out-of-bounds clicks are rejected. */
  addVertex(x: number, y: number): boolean {
    if (!(x >= 0 && x <= this.width && y >= 0 && y <= this.height)) {
      return false;
    }
    this.inProgress.push({ x, y });
    this.undoStack.push({ kind: "vertex" });
    return true;
  }

  /** Close the in-progress outline into the active (label, user) object.
   *
   * Creates the object on first use; a no-op (returning false) with fewer
   * than 3 vertices so the document always stays serializable.
   */
  closePolygon(): boolean {
    if (this.inProgress.length < 3) return false;
    let objectIndex = this.document.objects.findIndex(
      (obj) => obj.name === this.activeLabel && obj.user === this.activeUser,
    );
    let createdObject = false;
    if (objectIndex < 0) {
      this.document.objects.push({
        name: this.activeLabel,
        user: this.activeUser,
        polygons: [],
      });
      objectIndex = this.document.objects.length - 1;
      createdObject = true;
    }
    const vertices = this.inProgress;
    this.document.objects[objectIndex]!.polygons.push({
      vertices: vertices.map((v) => ({ x: v.x, y: v.y })),
    });
    this.inProgress = [];
    this.undoStack.push({ kind: "close", vertices, objectIndex, createdObject });
    return true;
  }

  /** Exact inverse of the last addVertex/closePolygon; false when empty. */
  undo(): boolean {
    const entry = this.undoStack.pop();
    if (entry === undefined) return false;
    if (entry.kind === "vertex") {
      this.inProgress.pop();
      return true;
    }
    const obj = this.document.objects[entry.objectIndex]!;
    obj.polygons.pop();
    if (entry.createdObject) {
      this.document.objects.splice(entry.objectIndex, 1);
    }
    this.inProgress = entry.vertices;
    return true;
  }

  get hasOpenPolygon(): boolean {
    return this.inProgress.length > 0;
  }

  get canUndo(): boolean {
    return this.undoStack.length > 0;
  }

  /** Canonical XML for the working document (open outlines are not included). */
  exportXml(): string {
    return serializeAnnotation(this.document);
  }

  /** Deep snapshot of the mutable editing state, for state-equality checks. */
  snapshot(): { document: AnnotationDocument; inProgress: Vertex[] } {
    return {
      document: cloneDocument(this.document),
      inProgress: this.inProgress.map((v) => ({ x: v.x, y: v.y })),
    };
  }
}

/** Start a session for an image, optionally pre-populated from sibling XML.
 *
 * Throws before constructing any session state, so a corrupt annotation
 * file leaves the caller's current session untouched.
 */
export function loadImage(
  imageName: string,
  width: number,
  height: number,
  existingXml?: string,
): AnnotationSession {
  return new AnnotationSession(imageName, width, height, { existingXml });
}
