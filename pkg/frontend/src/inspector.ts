// Per-node badges for a selected path.  Everything here is a re-labelling of
// fields from a /paths response: role comes from `roles`, blocked/opened
// status from `blockers` and `openers`, the witness from the opener entry.

import { PathPayload } from './api.js';

export interface NodeBadge {
  node: string;
  /** 'collider' | 'chain' | 'fork' as reported by the service. */
  role: string;
  /** Display text, e.g. "collider — blocks" or "fork — open". */
  text: string;
  /** The conditioned descendant that opened a collider, when one did. */
  witness: string | null;
}

export function pathNodes(p: PathPayload): string[] {
  return p.tokens.filter((t) => t !== '->' && t !== '<-');
}

export function pathLabel(p: PathPayload): string {
  return p.tokens.join(' ');
}

export function pathEdges(p: PathPayload): { tail: string; head: string }[] {
  const edges: { tail: string; head: string }[] = [];
  for (let i = 0; i + 2 < p.tokens.length; i += 2) {
    const a = p.tokens[i];
    const arrow = p.tokens[i + 1];
    const b = p.tokens[i + 2];
    edges.push(arrow === '->' ? { tail: a, head: b } : { tail: b, head: a });
  }
  return edges;
}

/** One badge per interior node; a single-edge path has none. */
export function pathBadges(p: PathPayload): NodeBadge[] {
  const roleOf = new Map(p.roles.map((r) => [r.node, r.role]));
  const blockerOf = new Map(p.blockers.map((b) => [b.node, b.reason]));
  const witnessOf = new Map(p.openers.map((o) => [o.collider, o.witness]));
  const interior = pathNodes(p).slice(1, -1);

  return interior.map((node) => {
    const role = roleOf.get(node) ?? 'chain';
    const reason = blockerOf.get(node);
    if (witnessOf.has(node)) {
      return {
        node,
        role,
        text: 'collider — opened by adjustment',
        witness: witnessOf.get(node) ?? null,
      };
    }
    if (reason === 'UnadjustedCollider') {
      return { node, role, text: 'collider — blocks', witness: null };
    }
    if (reason === 'AdjustedNonCollider') {
      return { node, role, text: 'non-collider — blocks', witness: null };
    }
    return { node, role, text: `${role} — open`, witness: null };
  });
}

/** Two paths are "the same" iff their token renderings agree. */
export function samePath(a: string[], b: string[]): boolean {
  return a.length === b.length && a.every((t, i) => t === b[i]);
}
