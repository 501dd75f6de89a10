/** Canvas UI: image display with zoom/pan, polygon drawing, color overlays,
 * per-user layer toggles, and XML import/export.  All state lives in the
 * page; the raster is only ever drawn, never modified. */

import { documentUsers } from "./model.js";
import { AnnotationSession, DEFAULT_LABELS, loadImage } from "./session.js";

const LABEL_COLORS: Record<string, string> = {
  road: "#d81b60",
  car: "#1e88e5",
  sky: "#ffc107",
  other: "#43a047",
};

function labelColor(label: string): string {
  const fixed = LABEL_COLORS[label];
  if (fixed !== undefined) return fixed;
  let h = 0;
  for (const ch of label) h = (h * 31 + ch.codePointAt(0)!) % 360;
  return `hsl(${h}, 70%, 45%)`;
}

interface View {
  scale: number;
  offsetX: number;
  offsetY: number;
}

class App {
  private session: AnnotationSession | null = null;
  private bitmap: ImageBitmap | null = null;
  private pendingXml: { name: string; text: string } | null = null;
  private view: View = { scale: 1, offsetX: 0, offsetY: 0 };
  private hiddenUsers = new Set<string>();
  private panFrom: { x: number; y: number } | null = null;

  private readonly canvas = document.getElementById("canvas") as HTMLCanvasElement;
  private readonly ctx = this.canvas.getContext("2d")!;
  private readonly banner = document.getElementById("banner")!;
  private readonly labelBar = document.getElementById("labels")!;
  private readonly labelInput = document.getElementById("label-input") as HTMLInputElement;
  private readonly userInput = document.getElementById("user-input") as HTMLInputElement;
  private readonly userLayers = document.getElementById("user-layers")!;
  private readonly imageInput = document.getElementById("image-input") as HTMLInputElement;
  private readonly xmlInput = document.getElementById("xml-input") as HTMLInputElement;

  constructor() {
    this.buildPalette();
    this.imageInput.addEventListener("change", () => void this.onImagePicked());
    this.xmlInput.addEventListener("change", () => void this.onXmlPicked());
    document.getElementById("close-btn")!.addEventListener("click", () => this.onClose());
    document.getElementById("undo-btn")!.addEventListener("click", () => this.onUndo());
    document.getElementById("export-btn")!.addEventListener("click", () => this.onExport());
    this.userInput.addEventListener("change", () => {
      if (this.session) this.session.activeUser = this.userInput.value.trim() || "anonymous";
    });
    this.labelInput.addEventListener("change", () => {
      const label = this.labelInput.value.trim();
      if (label && this.session) {
        this.session.activeLabel = label;
        this.buildPalette();
      }
    });
    this.canvas.addEventListener("click", (ev) => this.onClick(ev));
    this.canvas.addEventListener("dblclick", (ev) => {
      ev.preventDefault();
      this.onClose();
    });
    this.canvas.addEventListener("wheel", (ev) => this.onWheel(ev), { passive: false });
    this.canvas.addEventListener("mousedown", (ev) => {
      if (ev.button === 1 || ev.shiftKey) {
        this.panFrom = { x: ev.offsetX, y: ev.offsetY };
        ev.preventDefault();
      }
    });
    this.canvas.addEventListener("mousemove", (ev) => {
      if (this.panFrom) {
        this.view.offsetX += ev.offsetX - this.panFrom.x;
        this.view.offsetY += ev.offsetY - this.panFrom.y;
        this.panFrom = { x: ev.offsetX, y: ev.offsetY };
        this.render();
      }
    });
    window.addEventListener("mouseup", () => (this.panFrom = null));
    window.addEventListener("keydown", (ev) => {
      if ((ev.ctrlKey || ev.metaKey) && ev.key === "z") {
        ev.preventDefault();
        this.onUndo();
      } else if (ev.key === "Enter") {
        this.onClose();
      }
    });
    this.render();
  }

  private notify(message: string, isError = false): void {
    this.banner.textContent = message;
    this.banner.className = isError ? "banner error" : "banner";
  }

  private buildPalette(): void {
    this.labelBar.textContent = "";
    const labels = new Set<string>(DEFAULT_LABELS);
    if (this.session) {
      for (const obj of this.session.document.objects) labels.add(obj.name);
      labels.add(this.session.activeLabel);
    }
    for (const label of labels) {
      const btn = document.createElement("button");
      btn.textContent = label;
      btn.style.borderColor = labelColor(label);
      if (this.session && this.session.activeLabel === label) btn.classList.add("active");
      btn.addEventListener("click", () => {
        if (!this.session) return;
        this.session.activeLabel = label;
        this.buildPalette();
      });
      this.labelBar.appendChild(btn);
    }
  }

  private buildUserLayers(): void {
    this.userLayers.textContent = "";
    if (!this.session) return;
    for (const user of documentUsers(this.session.document)) {
      const box = document.createElement("label");
      const check = document.createElement("input");
      check.type = "checkbox";
      check.checked = !this.hiddenUsers.has(user);
      check.addEventListener("change", () => {
        if (check.checked) this.hiddenUsers.delete(user);
        else this.hiddenUsers.add(user);
        this.render();
      });
      box.appendChild(check);
      box.appendChild(document.createTextNode(` ${user}`));
      this.userLayers.appendChild(box);
    }
  }

  private async onImagePicked(): Promise<void> {
    const file = this.imageInput.files?.[0];
    if (!file) return;
    let bitmap: ImageBitmap;
    try {
      bitmap = await createImageBitmap(file);
    } catch {
      this.notify(`cannot decode ${file.name}`, true);
      return;
    }
    const xml = this.pendingXml;
    try {
      this.session = loadImage(file.name, bitmap.width, bitmap.height, xml?.text);
    } catch (err) {
      this.notify(`cannot load ${xml?.name ?? "annotation"}: ${(err as Error).message}`, true);
      return; // previous session (if any) stays active
    }
    this.bitmap = bitmap;
    this.session.activeUser = this.userInput.value.trim() || "anonymous";
    this.view = { scale: 1, offsetX: 0, offsetY: 0 };
    this.hiddenUsers.clear();
    this.notify(`${file.name} (${bitmap.width}x${bitmap.height})`);
    this.buildPalette();
    this.buildUserLayers();
    this.render();
  }

  private async onXmlPicked(): Promise<void> {
    const file = this.xmlInput.files?.[0];
    if (!file) return;
    const text = await file.text();
    this.pendingXml = { name: file.name, text };
    if (this.session && this.bitmap) {
      try {
        const next = loadImage(this.session.imageName, this.session.width, this.session.height, text);
        next.activeUser = this.session.activeUser;
        next.activeLabel = this.session.activeLabel;
        this.session = next;
        this.notify(`loaded ${file.name}`);
        this.buildPalette();
        this.buildUserLayers();
        this.render();
      } catch (err) {
        this.notify(`cannot load ${file.name}: ${(err as Error).message}`, true);
      }
    } else {
      this.notify(`${file.name} staged; open its image to annotate`);
    }
  }

  private toImage(ev: MouseEvent): { x: number; y: number } {
    return {
      x: (ev.offsetX - this.view.offsetX) / this.view.scale,
      y: (ev.offsetY - this.view.offsetY) / this.view.scale,
    };
  }

  private onClick(ev: MouseEvent): void {
    if (!this.session || this.panFrom) return;
    const { x, y } = this.toImage(ev);
    if (!this.session.addVertex(x, y)) {
      this.notify("click inside the image to add a vertex", true);
      return;
    }
    this.notify(`${this.session.inProgress.length} vertices in progress`);
    this.render();
  }

  private onClose(): void {
    if (!this.session) return;
    if (!this.session.closePolygon()) {
      this.notify("a polygon needs at least 3 vertices before closing", true);
      return;
    }
    this.notify(`closed a ${this.session.activeLabel} polygon`);
    this.buildUserLayers();
    this.render();
  }

  private onUndo(): void {
    if (!this.session || !this.session.undo()) return;
    this.notify("undone");
    this.buildPalette();
    this.buildUserLayers();
    this.render();
  }

  private onExport(): void {
    if (!this.session) return;
    if (this.session.hasOpenPolygon) {
      const discard = window.confirm(
        "The in-progress polygon is not closed and will not be exported. Continue?",
      );
      if (!discard) return;
    }
    const xml = this.session.exportXml();
    const stem = this.session.imageName.replace(/\.[^.]+$/, "");
    const blob = new Blob([xml], { type: "application/xml" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = `${stem}.xml`;
    link.click();
    URL.revokeObjectURL(link.href);
    this.notify(`exported ${stem}.xml`);
  }

  private onWheel(ev: WheelEvent): void {
    ev.preventDefault();
    const factor = ev.deltaY < 0 ? 1.1 : 1 / 1.1;
    const next = Math.min(Math.max(this.view.scale * factor, 0.1), 40);
    // keep the point under the cursor fixed while zooming
    this.view.offsetX = ev.offsetX - ((ev.offsetX - this.view.offsetX) / this.view.scale) * next;
    this.view.offsetY = ev.offsetY - ((ev.offsetY - this.view.offsetY) / this.view.scale) * next;
    this.view.scale = next;
    this.render();
  }

  private render(): void {
    const { ctx, canvas } = this;
    ctx.setTransform(1, 0, 0, 1, 0, 0);
    ctx.fillStyle = "#222";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    if (!this.bitmap || !this.session) {
      ctx.fillStyle = "#888";
      ctx.font = "16px sans-serif";
      ctx.fillText("Open an image to start annotating", 20, 40);
      return;
    }
    ctx.setTransform(this.view.scale, 0, 0, this.view.scale, this.view.offsetX, this.view.offsetY);
    ctx.drawImage(this.bitmap, 0, 0);

    for (const obj of this.session.document.objects) {
      if (this.hiddenUsers.has(obj.user)) continue;
      const color = labelColor(obj.name);
      for (const poly of obj.polygons) {
        ctx.beginPath();
        for (const [i, v] of poly.vertices.entries()) {
          if (i === 0) ctx.moveTo(v.x, v.y);
          else ctx.lineTo(v.x, v.y);
        }
        ctx.closePath();
        ctx.fillStyle = color + "55";
        ctx.fill();
        ctx.strokeStyle = color;
        ctx.lineWidth = 1.5 / this.view.scale;
        ctx.stroke();
      }
    }

    const open = this.session.inProgress;
    if (open.length > 0) {
      const color = labelColor(this.session.activeLabel);
      ctx.beginPath();
      for (const [i, v] of open.entries()) {
        if (i === 0) ctx.moveTo(v.x, v.y);
        else ctx.lineTo(v.x, v.y);
      }
      ctx.strokeStyle = color;
      ctx.lineWidth = 1.5 / this.view.scale;
      ctx.setLineDash([4 / this.view.scale, 4 / this.view.scale]);
      ctx.stroke();
      ctx.setLineDash([]);
      ctx.fillStyle = color;
      const r = 3 / this.view.scale;
      for (const v of open) {
        ctx.beginPath();
        ctx.arc(v.x, v.y, r, 0, Math.PI * 2);
        ctx.fill();
      }
    }
  }
}

new App();
