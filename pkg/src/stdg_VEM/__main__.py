from stdg_VEM.cli.Main import main

raise SystemExit(main())
