// SVG projection of the current graph.  The canvas owns no document state:
// it draws whatever graph payload it is handed (the workspace mirror on the
// main canvas, server surgery output in the instrument panel) and reports
// gestures back to its host.

import { EdgePayload, GraphPayload } from './api.js';

const SVG_NS = 'http://www.w3.org/2000/svg';
const VIEW_W = 640;
const VIEW_H = 420;
const PAD = 56;
const NODE_R = 16;

export interface BadgeSpec {
  text: string;
  witness: string | null;
}

export interface CanvasOptions {
  /** Nodes drawn with the adjustment box around them. */
  adjusted?: Set<string>;
  /** Edges drawn ghosted (the instrument surgery removals). */
  ghostEdges?: EdgePayload[];
  /** Edges of the currently highlighted path. */
  highlightEdges?: EdgePayload[];
  /** Inspector badges keyed by node name. */
  badges?: Map<string, BadgeSpec>;
  /** A refused edge insertion, drawn in place with its diagnostic code. */
  rejectedEdge?: { edge: EdgePayload; code: string } | null;
  interactive?: boolean;
}

export interface CanvasHost {
  onNodeClick?(name: string, event: MouseEvent): void;
  onMoveNode?(name: string, x: number, y: number): void;
}

interface Transform {
  minX: number;
  minY: number;
  sx: number;
  sy: number;
}

function edgeKey(e: EdgePayload): string {
  return `${e.tail}->${e.head}`;
}

export class GraphCanvas {
  private transform: Transform = { minX: 0, minY: 0, sx: 1, sy: 1 };
  private positions = new Map<string, { x: number; y: number }>();

  constructor(
    private readonly svg: SVGSVGElement,
    private readonly host: CanvasHost = {},
    private readonly markerId: string = 'arrow',
  ) {
    svg.setAttribute('viewBox', `0 0 ${VIEW_W} ${VIEW_H}`);
  }

  /** World coordinates for each node: the pos attribute when present, else a
   * deterministic layered slot (depth from the roots, row by name order). */
  private worldPositions(g: GraphPayload): Map<string, { x: number; y: number }> {
    const depth = new Map<string, number>();
    const parents = new Map<string, string[]>();
    for (const n of g.nodes) parents.set(n.name, []);
    for (const e of g.edges) parents.get(e.head)?.push(e.tail);
    const depthOf = (name: string, seen: Set<string>): number => {
      if (depth.has(name)) return depth.get(name) as number;
      if (seen.has(name)) return 0; // cycles never reach here, but stay total
      seen.add(name);
      const ps = parents.get(name) ?? [];
      const d = ps.length ? 1 + Math.max(...ps.map((p) => depthOf(p, seen))) : 0;
      depth.set(name, d);
      return d;
    };
    for (const n of g.nodes) depthOf(n.name, new Set());

    const rows = new Map<number, number>();
    const world = new Map<string, { x: number; y: number }>();
    for (const n of g.nodes) {
      if (n.pos) {
        world.set(n.name, { x: n.pos[0], y: n.pos[1] });
      } else {
        const d = depth.get(n.name) ?? 0;
        const row = rows.get(d) ?? 0;
        rows.set(d, row + 1);
        world.set(n.name, { x: d * 1.2, y: row * 1.2 });
      }
    }
    return world;
  }

  private fit(world: Map<string, { x: number; y: number }>) {
    let minX = Infinity; let minY = Infinity;
    let maxX = -Infinity; let maxY = -Infinity;
    for (const p of world.values()) {
      minX = Math.min(minX, p.x); maxX = Math.max(maxX, p.x);
      minY = Math.min(minY, p.y); maxY = Math.max(maxY, p.y);
    }
    if (!isFinite(minX)) { minX = 0; maxX = 1; minY = 0; maxY = 1; }
    const spanX = maxX - minX || 1;
    const spanY = maxY - minY || 1;
    this.transform = {
      minX,
      minY,
      sx: (VIEW_W - 2 * PAD) / spanX,
      sy: (VIEW_H - 2 * PAD) / spanY,
    };
  }

  private toPixel(w: { x: number; y: number }): { x: number; y: number } {
    const t = this.transform;
    return { x: PAD + (w.x - t.minX) * t.sx, y: PAD + (w.y - t.minY) * t.sy };
  }

  private toWorld(px: number, py: number): { x: number; y: number } {
    const t = this.transform;
    return { x: t.minX + (px - PAD) / t.sx, y: t.minY + (py - PAD) / t.sy };
  }

  /** Map a mouse event to SVG pixel space.  Overridable so tests can drive
   * drags without real layout geometry (jsdom has none). */
  svgPoint(event: MouseEvent): { x: number; y: number } {
    const ctm = (this.svg as { getScreenCTM?(): DOMMatrix | null }).getScreenCTM?.();
    if (ctm) {
      return {
        x: (event.clientX - ctm.e) / ctm.a,
        y: (event.clientY - ctm.f) / ctm.d,
      };
    }
    const rect = this.svg.getBoundingClientRect?.();
    if (rect && rect.width > 0 && rect.height > 0) {
      return {
        x: ((event.clientX - rect.left) / rect.width) * VIEW_W,
        y: ((event.clientY - rect.top) / rect.height) * VIEW_H,
      };
    }
    return { x: event.clientX, y: event.clientY };
  }

  render(g: GraphPayload, opts: CanvasOptions = {}) {
    while (this.svg.firstChild) this.svg.removeChild(this.svg.firstChild);
    const world = this.worldPositions(g);
    this.fit(world);
    this.positions = new Map(
      [...world.entries()].map(([name, w]) => [name, this.toPixel(w)]));

    this.svg.appendChild(this.makeDefs());
    const ghosts = new Set((opts.ghostEdges ?? []).map(edgeKey));
    const hot = new Set((opts.highlightEdges ?? []).map(edgeKey));

    for (const e of g.edges) {
      this.svg.appendChild(this.makeEdge(e, ghosts.has(edgeKey(e)), hot.has(edgeKey(e))));
    }
    if (opts.rejectedEdge) {
      this.svg.appendChild(this.makeRejectedEdge(opts.rejectedEdge.edge, opts.rejectedEdge.code));
    }
    for (const n of g.nodes) {
      this.svg.appendChild(this.makeNode(n, opts));
    }
  }

  private makeDefs(): SVGElement {
    const defs = document.createElementNS(SVG_NS, 'defs');
    for (const [suffix, klass] of [['', ''], ['-hot', 'hot'], ['-ghost', 'ghost']]) {
      const marker = document.createElementNS(SVG_NS, 'marker');
      marker.setAttribute('id', this.markerId + suffix);
      marker.setAttribute('viewBox', '0 0 10 10');
      marker.setAttribute('refX', '9');
      marker.setAttribute('refY', '5');
      marker.setAttribute('markerWidth', '7');
      marker.setAttribute('markerHeight', '7');
      marker.setAttribute('orient', 'auto-start-reverse');
      const tip = document.createElementNS(SVG_NS, 'path');
      tip.setAttribute('d', 'M 0 0 L 10 5 L 0 10 z');
      if (klass) tip.setAttribute('class', klass);
      marker.appendChild(tip);
      defs.appendChild(marker);
    }
    return defs;
  }

  private edgeEndpoints(e: EdgePayload) {
    const a = this.positions.get(e.tail);
    const b = this.positions.get(e.head);
    if (!a || !b) return null;
    const dx = b.x - a.x; const dy = b.y - a.y;
    const len = Math.hypot(dx, dy) || 1;
    const trim = (NODE_R + 3) / len;
    return {
      x1: a.x + dx * trim, y1: a.y + dy * trim,
      x2: b.x - dx * trim, y2: b.y - dy * trim,
    };
  }

  private makeEdge(e: EdgePayload, ghost: boolean, hotEdge: boolean): SVGElement {
    const line = document.createElementNS(SVG_NS, 'line');
    const ends = this.edgeEndpoints(e);
    if (ends) {
      line.setAttribute('x1', String(ends.x1));
      line.setAttribute('y1', String(ends.y1));
      line.setAttribute('x2', String(ends.x2));
      line.setAttribute('y2', String(ends.y2));
    }
    const classes = ['edge'];
    let suffix = '';
    if (ghost) { classes.push('ghost'); suffix = '-ghost'; }
    if (hotEdge) { classes.push('hot'); suffix = '-hot'; }
    line.setAttribute('class', classes.join(' '));
    line.setAttribute('data-edge', `${e.tail}->${e.head}`);
    line.setAttribute('marker-end', `url(#${this.markerId}${suffix})`);
    return line;
  }

  private makeRejectedEdge(e: EdgePayload, code: string): SVGElement {
    const group = document.createElementNS(SVG_NS, 'g');
    group.setAttribute('class', 'rejected-edge');
    const line = document.createElementNS(SVG_NS, 'line');
    const ends = this.edgeEndpoints(e);
    if (ends) {
      line.setAttribute('x1', String(ends.x1));
      line.setAttribute('y1', String(ends.y1));
      line.setAttribute('x2', String(ends.x2));
      line.setAttribute('y2', String(ends.y2));
      const label = document.createElementNS(SVG_NS, 'text');
      label.setAttribute('x', String((ends.x1 + ends.x2) / 2));
      label.setAttribute('y', String((ends.y1 + ends.y2) / 2 - 6));
      label.setAttribute('class', 'rejected-label');
      label.textContent = code;
      group.appendChild(line);
      group.appendChild(label);
    }
    group.setAttribute('data-edge', `${e.tail}->${e.head}`);
    return group;
  }

  private makeNode(n: GraphPayload['nodes'][number], opts: CanvasOptions): SVGElement {
    const p = this.positions.get(n.name) ?? { x: 0, y: 0 };
    const group = document.createElementNS(SVG_NS, 'g');
    const classes = ['node'];
    if (n.latent) classes.push('latent');
    if (n.selected) classes.push('selected');
    if (opts.adjusted?.has(n.name)) classes.push('adjusted');
    group.setAttribute('class', classes.join(' '));
    group.setAttribute('data-node', n.name);
    group.setAttribute('transform', `translate(${p.x},${p.y})`);

    if (opts.adjusted?.has(n.name)) {
      // The box around a node marks it as adjusted.
      const box = document.createElementNS(SVG_NS, 'rect');
      box.setAttribute('class', 'adjusted-box');
      box.setAttribute('x', String(-NODE_R - 6));
      box.setAttribute('y', String(-NODE_R - 6));
      box.setAttribute('width', String(2 * (NODE_R + 6)));
      box.setAttribute('height', String(2 * (NODE_R + 6)));
      group.appendChild(box);
    }
    if (n.selected) {
      const ring = document.createElementNS(SVG_NS, 'circle');
      ring.setAttribute('class', 'selection-ring');
      ring.setAttribute('r', String(NODE_R + 4));
      group.appendChild(ring);
    }
    const body = document.createElementNS(SVG_NS, 'circle');
    body.setAttribute('class', 'body');
    body.setAttribute('r', String(NODE_R));
    group.appendChild(body);

    const label = document.createElementNS(SVG_NS, 'text');
    label.setAttribute('class', 'node-label');
    label.setAttribute('y', String(NODE_R + 16));
    label.textContent = n.name;
    group.appendChild(label);

    const badge = opts.badges?.get(n.name);
    if (badge) {
      const tag = document.createElementNS(SVG_NS, 'text');
      tag.setAttribute('class', 'badge-text');
      tag.setAttribute('y', String(-NODE_R - 12));
      tag.textContent = badge.witness
        ? `${badge.text} (via ${badge.witness})`
        : badge.text;
      group.appendChild(tag);
    }

    if (opts.interactive !== false) this.wireGestures(group, n.name);
    return group;
  }

  private wireGestures(group: SVGElement, name: string) {
    let start: { x: number; y: number } | null = null;
    let moved = false;
    let last: { x: number; y: number } | null = null;

    const onMove = (ev: MouseEvent) => {
      if (!start) return;
      const p = this.svgPoint(ev);
      if (Math.hypot(p.x - start.x, p.y - start.y) > 3) moved = true;
      last = p;
      if (moved) group.setAttribute('transform', `translate(${p.x},${p.y})`);
    };
    const onUp = (ev: MouseEvent) => {
      window.removeEventListener('mousemove', onMove);
      window.removeEventListener('mouseup', onUp);
      if (!start) return;
      if (moved && last) {
        const w = this.toWorld(last.x, last.y);
        this.host.onMoveNode?.(
          name,
          Math.round(w.x * 100) / 100,
          Math.round(w.y * 100) / 100,
        );
      } else {
        this.host.onNodeClick?.(name, ev);
      }
      start = null;
    };
    group.addEventListener('mousedown', (ev) => {
      start = this.svgPoint(ev as MouseEvent);
      moved = false;
      last = null;
      window.addEventListener('mousemove', onMove);
      window.addEventListener('mouseup', onUp);
    });
  }
}
