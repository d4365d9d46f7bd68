// Plain-text rendering of a graph payload back into the DSL.
//
// This is deliberately NOT the canonical serializer — the server owns that.
// Canvas edits use it to express "the same graph, plus my change" as valid
// DSL text; the document then round-trips that text through /parse and adopts
// whatever canonical form the server returns.

import { GraphPayload } from './api.js';

function attrList(latent: boolean, selected: boolean,
                  pos: [number, number] | null): string {
  const parts: string[] = [];
  if (latent) parts.push('latent');
  if (selected) parts.push('selected');
  if (pos) parts.push(`pos="${pos[0]},${pos[1]}"`);
  return parts.length ? ` [${parts.join(', ')}]` : '';
}

export function dslFromGraph(g: GraphPayload): string {
  const lines = ['dag {'];
  for (const n of g.nodes) {
    lines.push(`  ${n.name}${attrList(n.latent, n.selected, n.pos)}`);
  }
  for (const e of g.edges) {
    lines.push(`  ${e.tail} -> ${e.head}`);
  }
  lines.push('}');
  return lines.join('\n') + '\n';
}

/** A structural copy so edit helpers can mutate without aliasing state. */
export function cloneGraph(g: GraphPayload): GraphPayload {
  return {
    nodes: g.nodes.map((n) => ({ ...n, pos: n.pos ? [n.pos[0], n.pos[1]] : null })),
    edges: g.edges.map((e) => ({ ...e })),
  };
}
