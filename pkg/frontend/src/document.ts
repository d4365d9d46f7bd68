// The workspace document.  The DSL text is the single source of truth; the
// canvas and every results panel are projections of it.  All canonical form
// comes from the server: each edit round-trips through /parse and adopts the
// response, so the document can never silently diverge from what the service
// would print.

import {
  ApiError,
  Client,
  DiagnosticPayload,
  EdgePayload,
  GraphPayload,
  ParsePayload,
} from './api.js';
import { cloneGraph, dslFromGraph } from './dsltext.js';

export interface QueryState {
  exposure: string | null;
  outcome: string | null;
  /** Nodes currently boxed as adjusted — the explicit conditioning set. */
  adjusted: Set<string>;
  /** Required interior nodes when targeting an indirect effect. */
  through: Set<string>;
  /** Instrument candidate for the IV panel, if chosen. */
  candidate: string | null;
}

/** A rejected canvas edit, kept so the UI can flag it at the offending spot. */
export interface EditRejection {
  code: string;
  message: string;
  diagnostics: DiagnosticPayload[];
  /** Set when the rejected edit was an edge insertion. */
  edge: EdgePayload | null;
}

export class Workspace {
  /** Editor contents; may be mid-edit and non-canonical. */
  text = '';
  /** Server-canonical serialization of the last successfully parsed graph. */
  canonical = '';
  graph: GraphPayload | null = null;
  warnings: DiagnosticPayload[] = [];
  /** Parse errors for the current editor text (empty when it parses). */
  diagnostics: DiagnosticPayload[] = [];
  /**
   * Bumped on every change that can alter query answers.  Outgoing requests
   * are tagged with it; responses for older revisions are discarded.
   */
  revision = 0;
  query: QueryState = {
    exposure: null,
    outcome: null,
    adjusted: new Set(),
    through: new Set(),
    candidate: null,
  };
  lastEditRejection: EditRejection | null = null;
  /** Fired after any state change; the shell re-renders and re-queries. */
  onChange: (() => void) | null = null;

  constructor(private readonly client: Client) {}

  node(name: string) {
    return this.graph?.nodes.find((n) => n.name === name) ?? null;
  }

  nodeNames(): string[] {
    return this.graph ? this.graph.nodes.map((n) => n.name) : [];
  }

  selectionNodes(): string[] {
    return this.graph ? this.graph.nodes.filter((n) => n.selected).map((n) => n.name) : [];
  }

  private notify() {
    this.onChange?.();
  }

  private adopt(payload: ParsePayload) {
    this.graph = { nodes: payload.nodes, edges: payload.edges };
    this.canonical = payload.dsl;
    this.warnings = payload.warnings;
    this.diagnostics = [];
    this.lastEditRejection = null;
    this.pruneQuery();
    this.revision += 1;
  }

  private pruneQuery() {
    const names = new Set(this.nodeNames());
    const q = this.query;
    if (q.exposure !== null && !names.has(q.exposure)) q.exposure = null;
    if (q.outcome !== null && !names.has(q.outcome)) q.outcome = null;
    if (q.candidate !== null && !names.has(q.candidate)) q.candidate = null;
    q.adjusted = new Set([...q.adjusted].filter((n) => names.has(n)));
    q.through = new Set([...q.through].filter((n) => names.has(n)));
  }

  /** Parse editor text (typing, import, fixture load).  The text is kept as
   * given; only canvas edits rewrite it to canonical form. */
  async loadText(text: string): Promise<boolean> {
    this.text = text;
    try {
      const payload = await this.client.parse(text);
      this.adopt(payload);
      this.notify();
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.diagnostics.length > 0) {
        // Document parse failure: keep the last good graph on the canvas and
        // surface the diagnostics beside the editor.
        this.diagnostics = err.diagnostics;
        this.notify();
        return false;
      }
      throw err;
    }
  }

  /** Canvas edits funnel through here: express the edited graph as DSL text,
   * round-trip it, adopt the canonical answer.  On rejection the document is
   * untouched and the refusal is kept for inline display. */
  private async applyEdit(edited: GraphPayload, edge: EdgePayload | null = null):
      Promise<boolean> {
    const attempt = dslFromGraph(edited);
    try {
      const payload = await this.client.parse(attempt);
      this.text = payload.dsl;
      this.adopt(payload);
      this.notify();
      return true;
    } catch (err) {
      if (err instanceof ApiError) {
        this.lastEditRejection = {
          code: err.diagnostics[0]?.code ?? err.code,
          message: err.message,
          diagnostics: err.diagnostics,
          edge,
        };
        this.notify();
        return false;
      }
      throw err;
    }
  }

  private edited(): GraphPayload {
    if (!this.graph) throw new Error('no document loaded');
    return cloneGraph(this.graph);
  }

  addNode(name: string): Promise<boolean> {
    const g = this.edited();
    g.nodes.push({ name, latent: false, selected: false, pos: null });
    return this.applyEdit(g);
  }

  removeNode(name: string): Promise<boolean> {
    const g = this.edited();
    g.nodes = g.nodes.filter((n) => n.name !== name);
    g.edges = g.edges.filter((e) => e.tail !== name && e.head !== name);
    return this.applyEdit(g);
  }

  addEdge(tail: string, head: string): Promise<boolean> {
    const g = this.edited();
    g.edges.push({ tail, head });
    return this.applyEdit(g, { tail, head });
  }

  removeEdge(tail: string, head: string): Promise<boolean> {
    const g = this.edited();
    g.edges = g.edges.filter((e) => !(e.tail === tail && e.head === head));
    return this.applyEdit(g);
  }

  toggleLatent(name: string): Promise<boolean> {
    const g = this.edited();
    const n = g.nodes.find((x) => x.name === name);
    if (n) {
      n.latent = !n.latent;
      if (n.latent) n.selected = false;
    }
    return this.applyEdit(g);
  }

  toggleSelected(name: string): Promise<boolean> {
    const g = this.edited();
    const n = g.nodes.find((x) => x.name === name);
    if (n) {
      n.selected = !n.selected;
      if (n.selected) n.latent = false;
    }
    return this.applyEdit(g);
  }

  moveNode(name: string, x: number, y: number): Promise<boolean> {
    const g = this.edited();
    const n = g.nodes.find((nn) => nn.name === name);
    if (n) n.pos = [x, y];
    return this.applyEdit(g);
  }

  // Query-panel state.  Adjustment is a query concern, not a graph edit: the
  // document text never changes, but answers do, so the revision still bumps.

  toggleAdjusted(name: string) {
    if (this.query.adjusted.has(name)) this.query.adjusted.delete(name);
    else this.query.adjusted.add(name);
    this.revision += 1;
    this.notify();
  }

  setEndpoints(exposure: string | null, outcome: string | null) {
    this.query.exposure = exposure;
    this.query.outcome = outcome;
    // An endpoint cannot sit in its own conditioning set; picking one
    // un-marks it rather than leaving an unanswerable query behind.
    for (const name of [exposure, outcome]) {
      if (name !== null) {
        this.query.adjusted.delete(name);
        this.query.through.delete(name);
      }
    }
    this.revision += 1;
    this.notify();
  }

  setCandidate(candidate: string | null) {
    this.query.candidate = candidate;
    this.revision += 1;
    this.notify();
  }

  toggleThrough(name: string) {
    if (this.query.through.has(name)) this.query.through.delete(name);
    else this.query.through.add(name);
    this.revision += 1;
    this.notify();
  }

  /** Document text for export / autosave: always the canonical form. */
  exportText(): string {
    return this.canonical;
  }
}
