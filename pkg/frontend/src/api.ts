// Typed client for the dsepkit JSON service.  Response shapes mirror the
// server's payload builders field for field; nothing here interprets a graph.

export interface DiagnosticPayload {
  line: number;
  column: number;
  severity: 'error' | 'warning';
  code: string;
  message: string;
}

export interface NodePayload {
  name: string;
  latent: boolean;
  selected: boolean;
  pos: [number, number] | null;
}

export interface EdgePayload {
  tail: string;
  head: string;
}

export interface GraphPayload {
  nodes: NodePayload[];
  edges: EdgePayload[];
}

export interface ParsePayload extends GraphPayload {
  dsl: string;
  warnings: DiagnosticPayload[];
}

export type NodeRole = 'collider' | 'chain' | 'fork';
export type BlockReason = 'UnadjustedCollider' | 'AdjustedNonCollider';

export interface PathPayload {
  tokens: string[];
  causal: boolean;
  open: boolean;
  roles: { node: string; role: NodeRole }[];
  blockers: { node: string; reason: BlockReason }[];
  openers: { collider: string; witness: string }[];
}

export interface PathsPayload {
  from: string;
  to: string;
  adjust: string[];
  effective: string[];
  count: number;
  paths: PathPayload[];
}

export interface DsepPayload {
  a: string;
  b: string;
  given: string[];
  effective: string[];
  separated: boolean;
  open_paths: string[][];
}

export interface AdjustmentCheckPayload {
  exposure: string;
  outcome: string;
  through: string[];
  set: string[];
  effective: string[];
  valid: boolean;
  checked_path_count: number;
  violations: { tokens: string[]; kind: 'OpenNonTarget' | 'BlockedTarget' }[];
  open_paths: string[][];
}

export interface AdjustmentSetsPayload {
  exposure: string;
  outcome: string;
  through: string[];
  sets: { set: string[]; minimal: boolean }[];
}

export interface IvCheckPayload {
  candidate: string;
  exposure: string;
  outcome: string;
  set: string[];
  relevance_ok: boolean;
  connected_in_original: boolean;
  exclusion_independence_ok: boolean;
  valid: boolean;
  original_open_paths: string[][];
  modified_open_paths: string[][];
  removed_edges: EdgePayload[];
  modified: GraphPayload;
}

export interface IvSearchPayload {
  exposure: string;
  outcome: string;
  results: { candidate: string; set: string[] }[];
}

export interface TransportPayload {
  selection: string;
  outcome: string;
  given: string[];
  effective: string[];
  transportable_suggested: boolean;
  open_paths: string[][];
}

export interface ErrorEnvelope {
  error: {
    code: string;
    message: string;
    diagnostics?: DiagnosticPayload[];
  };
}

/** Raised for any non-2xx response; carries the server's error envelope. */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly diagnostics: DiagnosticPayload[];

  constructor(status: number, code: string, message: string,
              diagnostics: DiagnosticPayload[] = []) {
    super(message);
    this.name = 'ApiError';
    this.status = status;
    this.code = code;
    this.diagnostics = diagnostics;
  }
}

// Narrow view of fetch so tests can substitute a replay double without
// constructing real Response objects.
export interface FetchResponseLike {
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init: { method: string; headers: Record<string, string>; body: string },
) => Promise<FetchResponseLike>;

function isEnvelope(body: unknown): body is ErrorEnvelope {
  return typeof body === 'object' && body !== null && 'error' in body;
}

export class Client {
  constructor(
    private readonly base: string = '',
    private readonly fetchImpl: FetchLike =
      (url, init) => fetch(url, init),
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    let parsed: unknown = null;
    try {
      parsed = await resp.json();
    } catch {
      // fall through to the status check with an empty body
    }
    if (resp.status >= 200 && resp.status < 300) return parsed as T;
    if (isEnvelope(parsed)) {
      const e = parsed.error;
      throw new ApiError(resp.status, e.code, e.message, e.diagnostics ?? []);
    }
    throw new ApiError(resp.status, 'ERROR', `request failed (${resp.status})`);
  }

  parse(dag: string | GraphPayload): Promise<ParsePayload> {
    return this.post('/api/v1/parse', { dag });
  }

  paths(req: { dag: string; from: string; to: string; adjust: string[] }): Promise<PathsPayload> {
    return this.post('/api/v1/paths', req);
  }

  dsep(req: { dag: string; a: string; b: string; given: string[] }): Promise<DsepPayload> {
    return this.post('/api/v1/dsep', req);
  }

  adjustmentCheck(req: { dag: string; exposure: string; outcome: string;
                         through: string[]; set: string[] }): Promise<AdjustmentCheckPayload> {
    return this.post('/api/v1/adjustment/check', req);
  }

  adjustmentSets(req: { dag: string; exposure: string; outcome: string;
                        through: string[] }): Promise<AdjustmentSetsPayload> {
    return this.post('/api/v1/adjustment/sets', req);
  }

  ivCheck(req: { dag: string; candidate: string; exposure: string; outcome: string;
                 set: string[] }): Promise<IvCheckPayload> {
    return this.post('/api/v1/iv/check', req);
  }

  ivSearch(req: { dag: string; exposure: string; outcome: string }): Promise<IvSearchPayload> {
    return this.post('/api/v1/iv/search', req);
  }

  transport(req: { dag: string; selection: string; outcome: string;
                   given: string[] }): Promise<TransportPayload> {
    return this.post('/api/v1/transport', req);
  }
}
