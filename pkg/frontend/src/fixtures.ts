// The worked examples shipped with the analysis engine, embedded so loading
// one is a single click.  The text constants are byte-for-byte copies of the
// repository's fixtures/*.dag files (a test enforces this), and each carries
// the query preset its walk-through uses.

export interface FixturePreset {
  exposure: string;
  outcome: string;
  candidate?: string;
}

export interface Fixture {
  name: string;
  title: string;
  dsl: string;
  preset: FixturePreset;
}

const FIG1A = `dag {
  Height [pos="1.0,1.0"]
  Nutrition [pos="2.0,0.0"]
  PlaysBasketball [pos="1.0,2.0"]
  Sex [pos="0.0,0.0"]
  Height -> PlaysBasketball
  Nutrition -> Height
  Sex -> Height
}
`;

const FIG1B = `dag {
  C1 [pos="0.5,2.5"]
  C2 [pos="3.5,-0.5"]
  E [pos="0.0,1.0"]
  M1 [pos="2.0,1.5"]
  M2 [pos="2.0,0.5"]
  O [pos="4.0,1.0"]
  S [selected, pos="2.0,3.0"]
  U1 [latent, pos="3.5,2.5"]
  U2 [latent, pos="0.5,-0.5"]
  U3 [latent, pos="2.0,-1.0"]
  C1 -> E
  C1 -> S
  C2 -> O
  E -> M1
  E -> M2
  M1 -> O
  M2 -> O
  U1 -> M1
  U1 -> O
  U1 -> S
  U2 -> E
  U2 -> M2
  U3 -> C2
  U3 -> M2
}
`;

const FIG2A = `dag {
  C1 [pos="3.0,2.0"]
  C2 [pos="0.5,0.0"]
  E [pos="1.5,1.0"]
  M [pos="2.0,0.0"]
  O [pos="3.5,1.0"]
  S [selected, pos="2.0,2.5"]
  U1 [latent, pos="0.0,2.0"]
  Z [pos="0.0,1.0"]
  C1 -> O
  C1 -> S
  C2 -> M
  E -> M
  E -> S
  M -> O
  U1 -> E
  U1 -> Z
  Z -> C2
}
`;

export const FIXTURES: Fixture[] = [
  {
    name: 'fig1a',
    title: 'Collider intuition (basketball)',
    dsl: FIG1A,
    preset: { exposure: 'Sex', outcome: 'Nutrition' },
  },
  {
    name: 'fig1b',
    title: 'Exposure–outcome study',
    dsl: FIG1B,
    preset: { exposure: 'E', outcome: 'O' },
  },
  {
    name: 'fig2a',
    title: 'Instrument candidate',
    dsl: FIG2A,
    preset: { exposure: 'E', outcome: 'O', candidate: 'Z' },
  },
];

export function fixtureByName(name: string): Fixture | null {
  return FIXTURES.find((f) => f.name === name) ?? null;
}
